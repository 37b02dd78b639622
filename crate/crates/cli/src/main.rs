//! `osc`: every pipeline of the engine behind one binary with deterministic
//! text or JSON output.
//!
//! Exit codes: 0 on success, 1 on a usage error, 2 when a computation or
//! input fails validation (the certificate is printed to stderr).

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use osc_core::chromatic::{e1_poly_closed, e1_poly_direct, e2_page, poincare_z2, presentation};
use osc_core::field::{Field, Rat, GF2};
use osc_core::formats::{
    arrangement_from_json, field_tag, graph_from_json, page_to_json, poly_string, poset_from_json,
    presheaf_from_json, PresheafData,
};
use osc_core::graph::{
    all_graphs_up_to_iso, bond_lattice, bond_lattice_with_cap, chromatic_poly_dc,
    chromatic_poly_mobius, SimpleGraph,
};
use osc_core::hyperplane::{
    braid_arrangement, complex_poincare, coordinate_arrangement, intersection_lattice, zaslavsky_f,
    CentralArrangement,
};
use osc_core::osalg::build_os;
use osc_core::oscomplex::{dg1_generation_check, CollapseFlag, E2Page, OSComplex};
use osc_core::poly::LaurentPoly2;
use osc_core::poset::GeometricLattice;
use osc_core::presheaf::ManifoldData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "osc", version, about = "Exact cohomology of arrangement complements and \
    graph-labeled configuration spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Coefficient field; defaults to the input file's "field" tag
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Override the element-count guard when building lattices
    #[arg(long, global = true)]
    max_lattice: Option<usize>,
    /// Seed for the sampled parts of `check`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "GF2", alias = "gf2")]
    Gf2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the bond lattice of a graph
    BondLattice { graph: PathBuf },
    /// Print the chromatic polynomial of a graph
    Chromatic { graph: PathBuf },
    /// Per-rank dimensions of the lattice algebra of a graph or arrangement
    OsDims { input: PathBuf },
    /// Two-variable block-dimension polynomial of a configuration space
    E1Poly { manifold: PathBuf, graph: PathBuf },
    /// Mod-2 Poincaré polynomial of a configuration space (zero diagonal)
    PoincareZ2 { manifold: PathBuf, graph: PathBuf },
    /// Betti numbers of a configuration space from the homology page
    Betti { manifold: PathBuf, graph: PathBuf },
    /// Exterior-algebra presentation of the mod-2 page
    Presentation { manifold: PathBuf, graph: PathBuf },
    /// Face counts of a real central arrangement
    Zaslavsky { arrangement: PathBuf },
    /// Poincaré polynomial of a complexified arrangement complement
    ComplexPoincare { arrangement: PathBuf },
    /// Homology page of a user-supplied poset and presheaf
    E2 { poset: PathBuf, presheaf: PathBuf },
    /// Run the built-in invariant suites
    Check {
        /// Run a single suite instead of all of them
        #[arg(long, value_enum)]
        suite: Option<Suite>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lattice,
    Os,
    Chromatic,
    Pipelines,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    // Field-flag conflicts are usage errors, not validation failures.
    if matches!(cli.cmd, Cmd::PoincareZ2 { .. } | Cmd::Presentation { .. })
        && cli.field == Some(FieldArg::Q)
    {
        eprintln!("error: this command computes over GF2; drop `--field Q`");
        std::process::exit(1);
    }
    if let Err(e) = run(&cli) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> Result<SimpleGraph> {
    Ok(graph_from_json(&read(path)?)?)
}

fn load_arrangement(path: &Path) -> Result<CentralArrangement> {
    Ok(arrangement_from_json(&read(path)?)?)
}

/// Pick the coefficient field: the explicit flag if given, otherwise the
/// file's own tag. Mismatches between flag and tag surface when the typed
/// reader runs.
fn choose_field(cli: &Cli, file: &str) -> Result<FieldArg> {
    if let Some(f) = cli.field {
        return Ok(f);
    }
    match field_tag(file)?.as_str() {
        "Q" => Ok(FieldArg::Q),
        "GF2" => Ok(FieldArg::Gf2),
        other => bail!("unsupported field tag {other:?}"),
    }
}

fn load_manifold<F: Field>(file: &str) -> Result<ManifoldData<F>> {
    Ok(osc_core::formats::manifold_from_json::<F>(file)?)
}

fn emit(cli: &Cli, text: String, json: Value) {
    match cli.format {
        OutputFormat::Text => println!("{text}"),
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&json).expect("serializable"))
        }
    }
}

/// Betti numbers of a page as a dense vector over total degrees 0..=max.
fn betti_vec<F: Field>(page: &E2Page<F>) -> Vec<usize> {
    let betti = page.betti();
    let max = betti.keys().next_back().copied().unwrap_or(0);
    (0..=max).map(|d| betti.get(&d).copied().unwrap_or(0)).collect()
}

fn betti_line<F: Field>(page: &E2Page<F>) -> String {
    let parts: Vec<String> = betti_vec(page).iter().map(usize::to_string).collect();
    format!("Betti ({}), collapse: {}", parts.join(","), page.collapse)
}

fn page_text<F: Field>(page: &E2Page<F>) -> String {
    let mut out = String::new();
    for (&(col, row), &d) in &page.dims {
        let _ = writeln!(out, "col {col}, row {row}: {d}");
    }
    let _ = writeln!(out, "poincare: {}", poly_string(&page.poincare()));
    let _ = write!(out, "collapse: {}", page.collapse);
    out
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::BondLattice { graph } => {
            let g = load_graph(graph)?;
            let bl = match cli.max_lattice {
                Some(cap) => bond_lattice_with_cap(&g, cap)?,
                None => bond_lattice(&g)?,
            };
            let po = bl.lattice.poset();
            let zero = bl.lattice.zero_hat();
            let mut text = format!("{} elements, top rank {}", po.len(), po.rank(bl.lattice.one_hat()));
            let mut elems = Vec::new();
            for p in 0..po.len() {
                let mu = po.mobius(zero, p)?;
                let _ = write!(text, "\nrank {}: {}  (mu {})", po.rank(p), po.label(p), mu);
                elems.push(json!({"label": po.label(p), "rank": po.rank(p), "mu": mu}));
            }
            emit(cli, text, json!({"elements": elems, "covers": po.covers()}));
        }
        Cmd::Chromatic { graph } => {
            let g = load_graph(graph)?;
            let p = poly_string(&chromatic_poly_dc(&g));
            emit(cli, p.clone(), json!({ "chromatic": p }));
        }
        Cmd::OsDims { input } => {
            let src = read(input)?;
            let v: Value = serde_json::from_str(&src).context("malformed JSON")?;
            let lattice: GeometricLattice = if v.get("vertices").is_some() {
                let g = graph_from_json(&src)?;
                match cli.max_lattice {
                    Some(cap) => bond_lattice_with_cap(&g, cap)?.lattice,
                    None => bond_lattice(&g)?.lattice,
                }
            } else {
                intersection_lattice(&arrangement_from_json(&src)?)?.lattice
            };
            let os = build_os(&lattice)?;
            let top = lattice.poset().rank(lattice.one_hat());
            let mut by_rank = vec![0usize; top + 1];
            for p in 0..lattice.len() {
                by_rank[lattice.poset().rank(p)] += os.dim(p);
            }
            let mut poly = LaurentPoly2::zero();
            let mut text = String::new();
            for (r, &d) in by_rank.iter().enumerate() {
                poly.add_term(0, r as i64, (d as i64).into());
                let _ = writeln!(text, "rank {r}: {d}");
            }
            let ps = poly_string(&poly);
            let _ = write!(text, "poincare: {ps}");
            emit(cli, text, json!({"dims_by_rank": by_rank, "poincare": ps}));
        }
        Cmd::E1Poly { manifold, graph } => {
            let file = read(manifold)?;
            let g = load_graph(graph)?;
            let p = match choose_field(cli, &file)? {
                FieldArg::Q => e1_poly_closed(&load_manifold::<Rat>(&file)?, &g),
                FieldArg::Gf2 => e1_poly_closed(&load_manifold::<GF2>(&file)?, &g),
            };
            let ps = poly_string(&p);
            emit(cli, ps.clone(), json!({ "e1_poly": ps }));
        }
        Cmd::PoincareZ2 { manifold, graph } => {
            let m = load_manifold::<GF2>(&read(manifold)?)?;
            let g = load_graph(graph)?;
            let ps = poly_string(&poincare_z2(&m, &g)?);
            emit(cli, ps.clone(), json!({ "poincare": ps }));
        }
        Cmd::Betti { manifold, graph } => {
            let file = read(manifold)?;
            let g = load_graph(graph)?;
            match choose_field(cli, &file)? {
                FieldArg::Q => {
                    let page = e2_page(&load_manifold::<Rat>(&file)?, &g)?;
                    let text = betti_line(&page);
                    match cli.format {
                        OutputFormat::Text => println!("{text}"),
                        OutputFormat::Json => println!("{}", page_to_json(&page)),
                    }
                }
                FieldArg::Gf2 => {
                    let page = e2_page(&load_manifold::<GF2>(&file)?, &g)?;
                    let text = betti_line(&page);
                    match cli.format {
                        OutputFormat::Text => println!("{text}"),
                        OutputFormat::Json => println!("{}", page_to_json(&page)),
                    }
                }
            }
        }
        Cmd::Presentation { manifold, graph } => {
            let m = load_manifold::<GF2>(&read(manifold)?)?;
            let g = load_graph(graph)?;
            let pres = presentation(&m, &g)?;
            let edges = g.edges();
            let gens: Vec<String> =
                pres.generators.iter().map(|(a, b)| format!("e({a},{b})")).collect();
            let mut text = format!(
                "generators: {} (total degree {})",
                if gens.is_empty() { "none".to_string() } else { gens.join(", ") },
                pres.generator_total_degree
            );
            let _ = write!(text, "\nendpoint relations: {}", pres.edge_relation_count);
            let _ = write!(text, "\ncycle relations: {}", pres.cycle_relations.len());
            for cyc in &pres.cycle_relations {
                let verts: Vec<String> =
                    cyc.iter().map(|&e| format!("({},{})", edges[e].0, edges[e].1)).collect();
                let _ = write!(text, "\n  cycle: {}", verts.join(" "));
            }
            let dims = poly_string(&pres.dims_poly());
            let _ = write!(text, "\ngraded dims: {dims}");
            let _ = write!(text, "\ndescribes: {}", pres.describes);
            let dims_json: Vec<Value> = pres
                .graded_dims
                .iter()
                .map(|(&(col, row), &d)| json!({"col": col, "row": row, "dim": d}))
                .collect();
            emit(
                cli,
                text,
                json!({
                    "generators": pres.generators,
                    "generator_total_degree": pres.generator_total_degree,
                    "base_ring_rank": pres.base_ring_basis.len(),
                    "endpoint_relations": pres.edge_relation_count,
                    "cycles": pres.cycle_relations,
                    "graded_dims": dims_json,
                    "dims_poly": dims,
                    "describes": pres.describes.to_string(),
                }),
            );
        }
        Cmd::Zaslavsky { arrangement } => {
            let a = load_arrangement(arrangement)?;
            let f = zaslavsky_f(&a)?;
            let parts: Vec<String> = f.iter().map(u64::to_string).collect();
            emit(cli, format!("f = ({})", parts.join(", ")), json!({ "f": f }));
        }
        Cmd::ComplexPoincare { arrangement } => {
            let a = load_arrangement(arrangement)?;
            let ps = poly_string(&complex_poincare(&a)?);
            emit(cli, ps.clone(), json!({ "poincare": ps }));
        }
        Cmd::E2 { poset, presheaf } => {
            let po = poset_from_json(&read(poset)?)?;
            let file = read(presheaf)?;
            match choose_field(cli, &file)? {
                FieldArg::Q => run_generic_e2::<Rat>(cli, &file, po)?,
                FieldArg::Gf2 => run_generic_e2::<GF2>(cli, &file, po)?,
            }
        }
        Cmd::Check { suite } => run_check(cli, *suite)?,
    }
    Ok(())
}

fn run_generic_e2<F: Field>(
    cli: &Cli,
    file: &str,
    poset: osc_core::poset::RankedPoset,
) -> Result<()> {
    let page = match presheaf_from_json::<F>(file, &poset)? {
        PresheafData::Plain(ps) => OSComplex::build(&ps)?.homology(),
        PresheafData::Monoidal(mp) => {
            mp.validate().map_err(|c| anyhow::anyhow!("presheaf validation failed: {c}"))?;
            let mut page = OSComplex::build_monoidal(&mp)?.e2_ring()?;
            page.collapse = if dg1_generation_check(&page)? {
                CollapseFlag::Detected
            } else {
                CollapseFlag::Unknown
            };
            page
        }
    };
    match cli.format {
        OutputFormat::Text => println!("{}", page_text(&page)),
        OutputFormat::Json => println!("{}", page_to_json(&page)),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The `check` suites
// ---------------------------------------------------------------------------

type SuiteFn = fn(u64) -> std::result::Result<(), String>;

fn run_check(cli: &Cli, only: Option<Suite>) -> Result<()> {
    let suites: [(Suite, &str, SuiteFn); 4] = [
        (Suite::Lattice, "lattice", suite_lattice),
        (Suite::Os, "os", suite_os),
        (Suite::Chromatic, "chromatic", suite_chromatic),
        (Suite::Pipelines, "pipelines", suite_pipelines),
    ];
    let mut failures = Vec::new();
    for (tag, name, f) in suites {
        if only.is_some() && only != Some(tag) {
            continue;
        }
        match f(cli.seed) {
            Ok(()) => println!("suite {name}: ok"),
            Err(msg) => {
                println!("suite {name}: FAILED");
                failures.push(format!("{name}: {msg}"));
            }
        }
    }
    if !failures.is_empty() {
        bail!("{}", failures.join("; "));
    }
    Ok(())
}

fn check(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

/// Face counts and chamber counts against Möbius sums on fixed arrangements.
fn suite_lattice(_seed: u64) -> std::result::Result<(), String> {
    let err = |e: osc_core::Error| e.to_string();
    let coords = coordinate_arrangement(3).map_err(err)?;
    check(zaslavsky_f(&coords).map_err(err)? == vec![1, 6, 12, 8], "coordinate face counts")?;
    for n in 2..=4 {
        let mut normals = Vec::new();
        for k in 0..n {
            normals.push(vec![Rat::from_int(1), Rat::from_int(k as i64)]);
        }
        let a = CentralArrangement::new(2, normals).map_err(err)?;
        check(
            zaslavsky_f(&a).map_err(err)? == vec![1, 2 * n as u64, 2 * n as u64],
            "pencil face counts",
        )?;
    }
    for a in [coords, braid_arrangement(4).map_err(err)?] {
        let f = zaslavsky_f(&a).map_err(err)?;
        let il = intersection_lattice(&a).map_err(err)?;
        let po = il.lattice.poset();
        let zero = il.lattice.zero_hat();
        let mut mu_sum = 0u64;
        for p in 0..po.len() {
            mu_sum += po.mobius(zero, p).map_err(err)?.unsigned_abs();
        }
        check(*f.last().unwrap() == mu_sum, "chambers differ from the Möbius sum")?;
    }
    Ok(())
}

/// Per-element dimensions equal |μ| on every bond lattice with ≤ 4 vertices.
fn suite_os(_seed: u64) -> std::result::Result<(), String> {
    let err = |e: osc_core::Error| e.to_string();
    for n in 1..=4 {
        for g in all_graphs_up_to_iso(n) {
            let bl = bond_lattice(&g).map_err(err)?;
            let os = build_os(&bl.lattice).map_err(err)?;
            let po = bl.lattice.poset();
            let zero = bl.lattice.zero_hat();
            for p in 0..po.len() {
                let mu = po.mobius(zero, p).map_err(err)?;
                check(
                    os.dim(p) as i64 == mu.abs(),
                    &format!("dimension at a lattice element of {:?} is not |mu|", g.edges()),
                )?;
            }
        }
    }
    Ok(())
}

/// Deletion–contraction equals the Möbius expansion; values count colorings.
fn suite_chromatic(_seed: u64) -> std::result::Result<(), String> {
    let err = |e: osc_core::Error| e.to_string();
    for n in 1..=5 {
        for g in all_graphs_up_to_iso(n) {
            let dc = chromatic_poly_dc(&g);
            let mo = chromatic_poly_mobius(&g).map_err(err)?;
            check(dc == mo, "the two chromatic computations disagree")?;
            if n <= 4 {
                for k in 0..=3i64 {
                    let val: num::BigInt = dc
                        .terms()
                        .map(|((_, e), c)| c * num::BigInt::from(k).pow(e as u32))
                        .sum();
                    check(
                        val == g.count_proper_colorings(k as usize),
                        "chromatic value differs from the coloring count",
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Closed form vs lattice sum (random Betti data), deletion–contraction, and
/// the mod-2 triple agreement.
fn suite_pipelines(seed: u64) -> std::result::Result<(), String> {
    let err = |e: osc_core::Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs: Vec<SimpleGraph> =
        (1..=3).flat_map(all_graphs_up_to_iso).chain([SimpleGraph::cycle(4)]).collect();
    for _ in 0..8 {
        let m = random_formal_manifold(&mut rng);
        for g in &graphs {
            let closed = e1_poly_closed(&m, g);
            check(
                closed == e1_poly_direct(&m, g).map_err(err)?,
                "closed and direct block polynomials disagree",
            )?;
            if let Some(&e) = g.edges().first() {
                let rhs = e1_poly_closed(&m, &g.delete_edge(e)).add(
                    &e1_poly_closed(&m, &g.contract_edge(e))
                        .shifted(-1, m.real_dim as i64),
                );
                check(closed == rhs, "deletion–contraction fails")?;
            }
        }
    }
    let m2 = ManifoldData::<GF2>::real_space(2);
    for g in &graphs {
        let direct = poincare_z2(&m2, g).map_err(err)?;
        let pres = presentation(&m2, g).map_err(err)?;
        let page = e2_page(&m2, g).map_err(err)?;
        check(pres.graded_dims == page.dims, "presentation and page dims disagree")?;
        let mut collapsed = LaurentPoly2::zero();
        for (&(col, row), &d) in &page.dims {
            collapsed.add_term(0, col + row, (d as i64).into());
        }
        check(direct == collapsed, "closed mod-2 polynomial disagrees with the page")?;
        check(page.collapse == CollapseFlag::Guaranteed, "collapse should be guaranteed")?;
    }
    Ok(())
}

/// A manifold stand-in with random Betti numbers, trivial positive products
/// and no diagonal data: enough structure for the polynomial pipelines.
fn random_formal_manifold(rng: &mut ChaCha8Rng) -> ManifoldData<Rat> {
    let m = rng.gen_range(1..=3usize);
    let extra = rng.gen_range(0..=3usize);
    let mut names = vec!["1".to_string()];
    let mut degs = vec![0usize];
    for i in 0..extra {
        names.push(format!("x{i}"));
        degs.push(rng.gen_range(1..=m));
    }
    let h = names.len();
    let mut cup = vec![vec![vec![Rat::zero(); h]; h]; h];
    #[allow(clippy::needless_range_loop)]
    for k in 0..h {
        cup[0][k][k] = Rat::one();
        cup[k][0][k] = Rat::one();
    }
    ManifoldData {
        name: "random".into(),
        real_dim: m,
        basis_names: names,
        basis_degs: degs,
        cup_table: cup,
        diagonal: vec![],
        diagonal_known: false,
        projective_complex: false,
    }
}
