//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails. Set `AKTON_BLESS=1` to rewrite the golden files.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use akton::digital::{eval_atom, simulate, Behaviour, Timing, Value, Waveform};
use akton::metric::{
    atom_profile, layout, metric_check, metric_multiple_fork, metric_multiple_join, metric_multiple_link, render_ascii,
    render_svg, sides, tilt, trim, Elem, Lane, MetricInterface, Tilt, Turn,
};
use akton::network::{complement, pre, reconstruct, suc, EdgeKind, Mode};
use akton::network::{is_isomorphic, linearize};
use akton::rewrite::{apply, Direction, Rule};
use akton::sort::{check, fundamental_sort, in_of, out_of, sort_of, SortError};
use akton::term::{parse_program, AtomClass, AtomRegistry, Program, Rotation, Term, BUILTIN_NAMES};
use akton::{Interface, Sort};
use petgraph::graph::UnGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn corpus(name: &str) -> Program {
    let src = fs::read_to_string(manifest().join("corpus").join(name)).unwrap();
    parse_program(&src, &AtomRegistry::new()).unwrap()
}

// ---- 1. production tables ----

struct TblCell {
    rel: String,
    row: Sort,
    col: Sort,
    result: Sort,
}

struct TblGrid {
    file: String,
    rel: String,
    rows: Vec<Sort>,
    cols: Vec<Sort>,
    cells: Vec<TblCell>,
}

fn read_grids(file: &str) -> Vec<TblGrid> {
    let src = fs::read_to_string(manifest().join("tables").join(file)).unwrap();
    let mut grids: Vec<TblGrid> = Vec::new();
    for line in src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "grid" {
            let c = words.iter().position(|&w| w == "cols").unwrap();
            grids.push(TblGrid {
                file: file.to_string(),
                rel: words[1].to_string(),
                rows: words[4..c].iter().map(|w| w.parse().unwrap()).collect(),
                cols: words[c + 1..].iter().map(|w| w.parse().unwrap()).collect(),
                cells: Vec::new(),
            });
        } else {
            let s = |i: usize| words[i].parse::<Sort>().unwrap();
            grids.last_mut().unwrap().cells.push(TblCell { rel: words[0].to_string(), row: s(1), col: s(2), result: s(3) });
        }
    }
    grids
}

fn compose_terms(rel: &str, x: &Term, y: &Term) -> Term {
    if rel == "next" {
        Term::next(x.clone(), y.clone())
    } else {
        Term::juxta(x.clone(), y.clone())
    }
}

fn table_fidelity() -> Outcome {
    let reg = AtomRegistry::new();
    let structural: Vec<TblGrid> = ["spatial.tbl", "planarizing.tbl", "linearizing.tbl", "twin_cut.tbl"]
        .iter()
        .flat_map(|f| read_grids(f))
        .collect();
    let first_defined = |rel: &str, r: Sort, c: Sort| {
        structural
            .iter()
            .flat_map(|g| g.cells.iter())
            .find(|x| x.rel == rel && x.row == r && x.col == c)
            .map(|x| x.result)
    };

    let mut witness: BTreeMap<Sort, Term> = BTreeMap::new();
    for (s, a) in [
        (Sort::E, "Entry"),
        (Sort::X, "Exit"),
        (Sort::B, "Link"),
        (Sort::CS, "CS"),
        (Sort::U, "Up"),
        (Sort::D, "Down"),
        (Sort::S, "Set"),
        (Sort::O, "Off"),
    ] {
        witness.insert(s, Term::atom(a));
    }
    loop {
        let mut grew = false;
        for c in structural.iter().flat_map(|g| g.cells.iter()) {
            if witness.contains_key(&c.result) {
                continue;
            }
            if let (Some(x), Some(y)) = (witness.get(&c.row), witness.get(&c.col)) {
                let t = compose_terms(&c.rel, x, y);
                witness.insert(c.result, t);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }

    let (mut filled, mut blank) = (0, 0);
    for g in &structural {
        for &r in &g.rows {
            for &c in &g.cols {
                let (Some(x), Some(y)) = (witness.get(&r), witness.get(&c)) else {
                    return Err(format!("no witness for {r:?} or {c:?}"));
                };
                let t = compose_terms(&g.rel, x, y);
                let got = sort_of(&t, &reg);
                match g.cells.iter().find(|x| x.row == r && x.col == c) {
                    Some(cell) => {
                        filled += 1;
                        let want = first_defined(&g.rel, r, c).unwrap();
                        ensure!(want == cell.result, "{}: {r:?} {} {c:?} disagrees across tables", g.file, g.rel);
                        ensure!(got == Ok(cell.result), "{}: {r:?} {} {c:?} gave {got:?}, want {:?}", g.file, g.rel, cell.result);
                    }
                    None => match first_defined(&g.rel, r, c) {
                        Some(other) => ensure!(got == Ok(other), "{r:?} {} {c:?} gave {got:?}", g.rel),
                        None => {
                            blank += 1;
                            ensure!(
                                matches!(got, Err(SortError::UndefinedComposition { .. })),
                                "{}: blank {r:?} {} {c:?} gave {got:?}",
                                g.file,
                                g.rel
                            );
                        }
                    },
                }
            }
        }
    }

    let fw: HashMap<Sort, Term> =
        [(Sort::H, "Entry"), (Sort::B, "Link"), (Sort::T, "Exit"), (Sort::CS, "CS")].map(|(s, a)| (s, Term::atom(a))).into();
    for g in read_grids("fundamental.tbl") {
        for &r in &[Sort::H, Sort::B, Sort::T, Sort::CS] {
            for &c in &[Sort::H, Sort::B, Sort::T, Sort::CS] {
                let got = fundamental_sort(&compose_terms(&g.rel, &fw[&r], &fw[&c]), &reg);
                match g.cells.iter().find(|x| x.row == r && x.col == c) {
                    Some(cell) => {
                        filled += 1;
                        ensure!(got == Ok(cell.result), "fundamental {r:?} {} {c:?} gave {got:?}", g.rel);
                    }
                    None => {
                        blank += 1;
                        ensure!(got.is_err(), "fundamental blank {r:?} {} {c:?} gave {got:?}", g.rel);
                    }
                }
            }
        }
    }
    Ok(format!("{filled} cells, {blank} blanks, {} witnesses", witness.len()))
}

// ---- 2. interfaces ----

fn atom_widths(name: &str) -> (usize, usize) {
    match name {
        "Entry" | "Up" | "Set" => (0, 1),
        "Exit" | "Down" | "Off" => (1, 0),
        "CS" => (0, 0),
        "Fork" | "F_lr" | "F_ls" | "F_sr" => (1, 2),
        "Join" | "And" | "Or" | "J_lr" | "J_ls" | "J_sr" => (2, 1),
        _ => (1, 1),
    }
}

fn interface_calculus() -> Outcome {
    let reg = AtomRegistry::new();
    for name in BUILTIN_NAMES {
        let t = Term::atom(name);
        let (i, o) = atom_widths(name);
        ensure!(in_of(&t, &reg) == Interface(i) && out_of(&t, &reg) == Interface(o), "{name} interfaces");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut nexts = 0;
    for n in 0..10_000 {
        let t = if n % 2 == 0 { common::random_term(&mut rng, 6) } else { common::random_program(&mut rng) };
        for p in t.paths() {
            match t.get(&p).unwrap() {
                Term::Next(x, y) => {
                    let sub = t.get(&p).unwrap();
                    ensure!(in_of(sub, &reg) == in_of(x, &reg), "in(x>y) at {p} of {t}");
                    ensure!(out_of(sub, &reg) == out_of(y, &reg), "out(x>y) at {p} of {t}");
                    nexts += 1;
                }
                Term::Juxta(x, y) => {
                    let sub = t.get(&p).unwrap();
                    ensure!(in_of(sub, &reg).len() == in_of(x, &reg).len() + in_of(y, &reg).len(), "|in(x/y)| at {p}");
                    ensure!(out_of(sub, &reg).len() == out_of(x, &reg).len() + out_of(y, &reg).len(), "|out(x/y)| at {p}");
                }
                Term::Atom(_) => {}
            }
        }
        if n % 2 == 1 {
            ensure!(check(&t, &reg).is_well_formed(), "generated program {t} is ill-formed");
        }
    }
    for _ in 0..1000 {
        let [a, b, c] = [0; 3].map(|_| Interface(rng.gen_range(0..8)));
        ensure!(a.juxta(b).juxta(c) == a.juxta(b.juxta(c)), "interface associativity");
        ensure!(a.juxta(Interface::EMPTY) == a && Interface::EMPTY.juxta(a) == a, "interface identity");
    }
    Ok(format!("{} atoms, 10000 terms, {nexts} Next nodes", BUILTIN_NAMES.len()))
}

// ---- 3. round trips ----

fn round_trips() -> Outcome {
    let reg = AtomRegistry::new();
    let mut largest = 0;
    let mut offs = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_network(&mut rng, 30, 3);
        largest = largest.max(g.nodes.len());
        ensure!(g.nodes.len() <= 30, "seed {seed}: network has {} nodes", g.nodes.len());
        let t = linearize(&g, &reg).map_err(|e| format!("seed {seed}: {e}"))?;
        offs += t.count_atom("Off");
        let back = reconstruct(&t, &reg, Mode::Heal).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(is_isomorphic(&g, &back), "seed {seed}: {t} does not round-trip");
    }
    Ok(format!("200 networks, up to {largest} nodes, {offs} feedback cuts"))
}

// ---- 4. tetrahedron ----

fn tetrahedron() -> Outcome {
    let p = corpus("tetrahedron.akt");
    let reg = &p.registry;
    let healed = reconstruct(p.main(), reg, Mode::Heal).map_err(|e| e.to_string())?;
    let (keep, edges) = healed.junction_graph(reg);
    let index: HashMap<usize, u32> = keep.iter().enumerate().map(|(i, &n)| (n, i as u32)).collect();
    let g = UnGraph::<(), ()>::from_edges(edges.iter().map(|(a, b)| (index[a], index[b])));
    let k4 = UnGraph::<(), ()>::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    ensure!(keep.len() == 4, "{} junctions", keep.len());
    ensure!(petgraph::algo::is_isomorphic(&g, &k4), "junction graph is not K4: {edges:?}");
    ensure!(g.node_indices().all(|n| g.neighbors(n).count() == 3), "not 3-valent");
    let cut = reconstruct(p.main(), reg, Mode::KeepCuts).map_err(|e| e.to_string())?;
    let (s, pl) = (cut.count_kind(EdgeKind::CutSpatial), cut.count_kind(EdgeKind::CutPlanar));
    ensure!((s, pl) == (1, 1), "cut edges: {s} spatial, {pl} planar");
    Ok("K4, 3-valent, 1 spatial + 1 planar cut".into())
}

// ---- 5. DNA ----

fn dna() -> Outcome {
    let p = corpus("dna.akt");
    let reg = &p.registry;
    let body = |n: &str| reg.get(n).and_then(|d| d.body()).cloned().ok_or(format!("{n} undefined"));
    let a = body("A")?;
    let s = |t: &Term| sort_of(t, reg).map_err(|e| e.to_string());
    ensure!(s(pre(&a).unwrap())? == Sort::BU && s(suc(&a).unwrap())? == Sort::BO, "A is not BU>BO");
    ensure!(s(&a)? == Sort::BUBO, "sort(A) = {:?}", s(&a));
    let ca = complement(&a);
    ensure!(s(pre(&ca).unwrap())? == Sort::BD && s(suc(&ca).unwrap())? == Sort::BS, "complement(A) is not BD>BS: {ca}");
    ensure!(s(&ca)? == Sort::BDBS, "sort(complement(A)) = {:?}", s(&ca));
    for n in ["A", "T", "G", "C"] {
        let t = body(n)?;
        ensure!(complement(&complement(&t)) == t, "complement is not an involution on {n}");
        ensure!(check(&t, reg).sort.is_some(), "{n} has no sort");
    }
    ensure!(check(p.main(), reg).is_well_formed(), "A/T pair is ill-formed");
    Ok("A: BU>BO = BUBO, complement BD>BS, involution on A T G C".into())
}

// ---- 6. digital ----

fn rank(v: Value) -> u8 {
    match v {
        Value::Zero => 0,
        Value::Undef => 1,
        Value::One => 2,
    }
}

fn unrank(r: u8) -> Value {
    [Value::Zero, Value::Undef, Value::One][r as usize]
}

fn run_io(p: &Program, bits: &[u8], timing: Timing) -> Result<(Vec<Value>, Behaviour), String> {
    let w = Waveform::constant(&bits.iter().map(|&b| Value::from_bool(b == 1)).collect::<Vec<_>>());
    run_wave(p, &w, timing)
}

fn run_wave(p: &Program, w: &Waveform, timing: Timing) -> Result<(Vec<Value>, Behaviour), String> {
    let tr = simulate(p.main(), &p.registry, w, 64, timing).map_err(|e| e.to_string())?;
    Ok((tr.outputs().to_vec(), tr.behaviour))
}

fn digital() -> Outcome {
    let mut cases = 0;
    for x in Value::ALL {
        for y in Value::ALL {
            let and = eval_atom(AtomClass::And, &[x, y], Value::Undef).map_err(|e| e.to_string())?;
            let or = eval_atom(AtomClass::Or, &[x, y], Value::Undef).map_err(|e| e.to_string())?;
            ensure!(and == [unrank(rank(x).min(rank(y)))], "And({x},{y})");
            ensure!(or == [unrank(rank(x).max(rank(y)))], "Or({x},{y})");
            cases += 2;
        }
        let not = eval_atom(AtomClass::Not, &[x], Value::Undef).map_err(|e| e.to_string())?;
        ensure!(not == [unrank(2 - rank(x))], "Not({x})");
        ensure!(eval_atom(AtomClass::Wire, &[x], Value::Undef).map_err(|e| e.to_string())? == [x], "Wire({x})");
        ensure!(eval_atom(AtomClass::Fork, &[x], Value::Undef).map_err(|e| e.to_string())? == [x, x], "Fork({x})");
        ensure!(eval_atom(AtomClass::Entry, &[], x).map_err(|e| e.to_string())? == [x], "Entry({x})");
        cases += 4;
    }
    let bit = |b: u8| Value::from_bool(b == 1);
    let ha = corpus("halfadder.akt");
    for a in 0..2u8 {
        for b in 0..2u8 {
            let (out, _) = run_io(&ha, &[a, b], Timing::Unit)?;
            ensure!(out == [bit((a + b) % 2), bit((a + b) / 2)], "half adder {a}+{b} gave {out:?}");
        }
    }
    let fa = corpus("fulladder.akt");
    for n in 0..8u8 {
        let (a, b, c) = (n >> 2 & 1, n >> 1 & 1, n & 1);
        let (out, _) = run_io(&fa, &[a, b, c], Timing::Unit)?;
        let sum = a + b + c;
        ensure!(out == [bit(sum % 2), bit(sum / 2)], "full adder {a}+{b}+{c} gave {out:?}");
    }
    let osc = corpus("oscillator.akt");
    let (_, calm) = run_io(&osc, &[0], Timing::Settle)?;
    ensure!(matches!(calm, Behaviour::Steady { .. }), "oscillator under 0: {calm:?}");
    let init = Waveform::new(vec![vec![Value::Zero, Value::One]]);
    let (_, busy) = run_wave(&osc, &init, Timing::Settle)?;
    ensure!(matches!(busy, Behaviour::Oscillating { period: 2, from } if from < 64), "oscillator under 0 then 1: {busy:?}");
    let (_, unit) = run_wave(&osc, &init, Timing::Unit)?;
    Ok(format!("{cases} gate cases, half adder 4/4, full adder 8/8, oscillator settle {busy:?}, unit {unit:?}"))
}

// ---- 7. rewrites ----

fn rewrite_preservation() -> Outcome {
    let reg = AtomRegistry::new();
    let rules = Rule::all();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut per_rule: BTreeMap<String, usize> = BTreeMap::new();
    let mut applied = 0;
    let mut attempts = 0;
    let reach = |t: &Term| reconstruct(t, &reg, Mode::Heal).map(|n| common::reachability(&n)).map_err(|e| format!("{t}: {e}"));
    while applied < 2000 {
        let mut t = common::random_program(&mut rng);
        let want = reach(&t)?;
        let mut last: Option<(Rule, akton::term::Path)> = None;
        for _ in 0..12 {
            attempts += 1;
            ensure!(attempts < 500_000, "only {applied} applications in {attempts} attempts");
            let (rule, path) = match last.take() {
                Some((r, p)) if r.kind.reversible() && rng.gen_bool(0.3) => {
                    let dir = if r.dir == Direction::Forward { Direction::Backward } else { Direction::Forward };
                    (Rule { kind: r.kind, dir }, p)
                }
                _ => (*rules.choose(&mut rng).unwrap(), t.paths().choose(&mut rng).unwrap().clone()),
            };
            let Ok(next) = apply(rule, &t, &path, &reg, None) else { continue };
            last = Some((rule, path.clone()));
            let got = reach(&next)?;
            ensure!(got == want, "{rule} at {path} on {t} changed reachability to {next}");
            *per_rule.entry(rule.to_string()).or_default() += 1;
            applied += 1;
            t = next;
        }
    }
    ensure!(per_rule.len() == rules.len(), "rules never applied: {:?}", rules.iter().map(|r| r.to_string()).filter(|r| !per_rule.contains_key(r)).collect::<Vec<_>>());
    Ok(format!("{applied} applications of {} rules in {attempts} attempts", per_rule.len()))
}

// ---- 8. metric laws ----

fn profile(e: &str) -> [MetricInterface; 4] {
    let el = |c: char| MetricInterface(vec![if c == 'P' { Elem::Pin } else { Elem::Gap }]);
    let c: Vec<char> = e.chars().collect();
    [el(c[0]), el(c[1]), el(c[2]), el(c[3])]
}

fn oracle_trim(i: &MetricInterface) -> String {
    let s: String = i.0.iter().map(|e| if *e == Elem::Pin { 'P' } else { 'G' }).collect();
    s.trim_matches('G').to_string()
}

fn random_iface(rng: &mut ChaCha8Rng) -> MetricInterface {
    let n = rng.gen_range(0..5);
    MetricInterface((0..n).map(|_| if rng.gen_bool(0.5) { Elem::Pin } else { Elem::Gap }).collect())
}

fn metric_laws() -> Outcome {
    let reg = AtomRegistry::new();
    let fixture = [
        ("Entry", "GGPG"),
        ("Up", "GGPG"),
        ("Set", "GGPG"),
        ("Exit", "PGGG"),
        ("Down", "PGGG"),
        ("Off", "PGGG"),
        ("CS", "GGGG"),
        ("F_lr", "PPGP"),
        ("F_ls", "PPPG"),
        ("F_sr", "PGPP"),
        ("J_lr", "GPPP"),
        ("J_ls", "PPPG"),
        ("J_sr", "PGPP"),
        ("L_s", "PGPG"),
        ("L_l", "PPGG"),
        ("L_r", "PGGP"),
    ];
    for (name, want) in fixture {
        let got = sides(name, &reg).map_err(|e| e.to_string())?;
        ensure!(got.sides == profile(want), "{name} sides {:?}", got.sides);
        for k in 0..4 {
            let rot = atom_profile(name, Rotation::quarters(k), &reg).map_err(|e| e.to_string())?;
            for s in 0..4 {
                ensure!(rot.sides[(s + k as usize) % 4] == got.sides[s], "{name} rotated by {k}");
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let t = common::random_metric_term(&mut rng, 5);
        let tl = |x: &Term| tilt(x, Tilt::Left, &reg).map_err(|e| e.to_string());
        let tr = |x: &Term| tilt(x, Tilt::Right, &reg).map_err(|e| e.to_string());
        ensure!(tl(&tr(&t)?)? == t && tr(&tl(&t)?)? == t, "tl.tr != id on {t}");
        ensure!(tl(&tl(&t)?)? == tr(&tr(&t)?)?, "tl^2 != tr^2 on {t}");
        ensure!(tl(&tl(&tl(&tl(&t)?)?)?)? == t, "tl^4 != id on {t}");
    }
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..1000 {
        let (a, b) = (random_iface(&mut rng), random_iface(&mut rng));
        ensure!(trim(&trim(&a)) == trim(&a), "trim not idempotent on {a}");
        ensure!(oracle_trim(&trim(&a)) == oracle_trim(&a) && trim(&a).0.len() == oracle_trim(&a).len(), "trim({a})");
        let same = oracle_trim(&a) == oracle_trim(&b);
        match metric_check(&a, &b) {
            Ok(off) => {
                ensure!(same, "{a} > {b} accepted");
                if let (Some(x), Some(y)) = (a.first_pin(), b.first_pin()) {
                    ensure!(off == x as i64 - y as i64, "offset {off} for {a} > {b}");
                }
                accepted += 1;
            }
            Err(_) => {
                ensure!(!same, "{a} > {b} rejected");
                rejected += 1;
            }
        }
    }
    Ok(format!("{} profiles, 1000 tilt terms, gating {accepted} accepted / {rejected} rejected", fixture.len()))
}

// ---- 9. layout ----

fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path = manifest().join("tests/golden").join(name);
    if std::env::var_os("AKTON_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
    }
    let want = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure!(want == actual, "{name} differs from the golden file");
    Ok(())
}

fn layout_geometry() -> Outcome {
    let reg = AtomRegistry::new();
    let checked = |t: &Term| -> Result<akton::metric::LayoutGrid, String> {
        let g = layout(t, &reg).map_err(|e| format!("{t}: {e}"))?;
        ensure!(g.cells.len() == t.atoms().len(), "{t}: {} cells for {} atoms", g.cells.len(), t.atoms().len());
        g.check_adjacency().map_err(|e| format!("{t}: {e}"))?;
        Ok(g)
    };
    let mut count = 0;
    for i in 1..=8 {
        for turn in [Turn::Left, Turn::Right] {
            let g = checked(&metric_multiple_link(i, turn))?;
            ensure!(g.size() == (i + 1, i + 1), "mL {turn:?}({i}) is {:?}", g.size());
            count += 1;
        }
        checked(&metric_multiple_link(i, Turn::Straight))?;
        for lane in [Lane::Ls, Lane::Sr] {
            checked(&metric_multiple_fork(i, lane).unwrap())?;
            checked(&metric_multiple_join(i, lane).unwrap())?;
        }
    }
    for name in ["left_strip", "fork_strip"] {
        let p = corpus(&format!("{name}.akt"));
        let g = checked(p.main())?;
        let g2 = layout(p.main(), &p.registry).unwrap();
        let (ascii, svg) = (render_ascii(&g), render_svg(&g));
        ensure!(ascii == render_ascii(&g2) && svg == render_svg(&g2), "{name} renders differ between runs");
        golden(&format!("{name}.txt"), &ascii)?;
        golden(&format!("{name}.svg"), &svg)?;
    }
    Ok(format!("{count} tilted squares, forks/joins i<=8, 4 golden renders"))
}

// ---- 10. CLI determinism ----

fn invocations(file: &FsPath) -> Vec<Vec<String>> {
    let f = file.to_string_lossy().to_string();
    let src = fs::read_to_string(file).unwrap();
    let v = |a: &[&str]| a.iter().map(|s| s.to_string()).chain([f.clone()]).collect::<Vec<_>>();
    let mut out = vec![
        v(&["parse"]),
        v(&["check"]),
        v(&["--format", "json", "check"]),
        v(&["graph"]),
        v(&["--format", "text", "graph"]),
        v(&["--format", "dot", "graph"]),
        v(&["linearize"]),
        v(&["rewrite", "--rule", "link-post"]),
        v(&["rewrite", "--rule", "assoc-next:bwd"]),
        v(&["layout"]),
        v(&["--format", "svg", "layout"]),
        v(&["--format", "json", "layout"]),
    ];
    if src.contains("#! inputs:") {
        let n = src.lines().find_map(|l| l.strip_prefix("#! inputs:")).unwrap().split_whitespace().count();
        let bits: String = (0..n).map(|k| if k % 2 == 0 { '1' } else { '0' }).collect();
        let names: Vec<String> = src
            .lines()
            .find_map(|l| l.strip_prefix("#! inputs:"))
            .unwrap()
            .split_whitespace()
            .zip(bits.chars())
            .map(|(n, b)| format!("{n}=0{b}"))
            .collect();
        out.push(v(&["simulate", "--inputs", &names.join(",")]));
        out.push(v(&["--format", "json", "simulate", "--timing", "settle", "--inputs", &names.join(",")]));
    }
    out
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_aktonc");
    let mut files: Vec<PathBuf> = fs::read_dir(manifest().join("corpus")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut runs = 0;
    for f in &files {
        for args in invocations(f) {
            let a = Command::new(exe).args(&args).output().map_err(|e| e.to_string())?;
            let b = Command::new(exe).args(&args).output().map_err(|e| e.to_string())?;
            ensure!(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status, "aktonc {args:?} is not deterministic");
            ensure!(!a.stdout.is_empty() || !a.stderr.is_empty(), "aktonc {args:?} printed nothing");
            runs += 1;
        }
    }
    Ok(format!("{runs} invocations over {} corpus files", files.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table fidelity", table_fidelity, Duration::from_secs(1)),
        ("interface calculus", interface_calculus, Duration::from_secs(5)),
        ("network round trips", round_trips, Duration::from_secs(30)),
        ("tetrahedron", tetrahedron, Duration::MAX),
        ("dna complementarity", dna, Duration::MAX),
        ("digital semantics", digital, Duration::from_secs(1)),
        ("rewrite preservation", rewrite_preservation, Duration::from_secs(60)),
        ("metric laws", metric_laws, Duration::MAX),
        ("layout geometry", layout_geometry, Duration::from_secs(5)),
        ("cli determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(_) if took > *limit => Err(format!("took {took:?}, limit {limit:?}")),
            r => r,
        };
        match res {
            Ok(detail) => writeln!(out, "criterion {:2} {name}: pass ({} ms) {detail}", i + 1, took.as_millis()),
            Err(why) => {
                failed += 1;
                writeln!(out, "criterion {:2} {name}: FAIL ({} ms) {why}", i + 1, took.as_millis())
            }
        }
        .unwrap();
    }
    writeln!(out, "acceptance: {} passed, {failed} failed", criteria.len() - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
