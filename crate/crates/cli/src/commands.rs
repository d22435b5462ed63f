//! Subcommands of the `pachner` tool.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use pachner_core::haken::check_bounds_of;
use pachner_core::normal::{enumerate_fundamental_solutions, enumerate_vertex_solutions, is_vertex_surface};
use pachner_core::{
    apply_moves, boundary_components, canonical_signature, connect, decompose, enumerate_moves, exactness_check,
    explore, homology_groups, peripheral_map, random_walk, relative_homology, render_bound, skeleton, theorem_bound,
    tower_cmp, validate, verify_additivity, HakenError, HomologyGroup, Manifold, NormalError, SearchStatus,
    Triangulation, Verdict,
};

use crate::format::{parse_moves, parse_nsc, parse_tri, write_moves, write_tri};

#[derive(Parser, Debug)]
#[command(name = "pachner", about = "Triangulated 3-manifolds: moves, search, homology and normal surfaces")]
pub struct Cli {
    /// Print `key<TAB>value` lines.
    #[arg(long, global = true)]
    pub porcelain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the gluings and the manifold conditions.
    Validate { file: PathBuf },
    /// Vertex, edge and face classes, links and boundary.
    Skeleton { file: PathBuf },
    /// Canonical signature, or `--check a b` for an isomorphism test.
    Isosig {
        #[arg(required_unless_present = "check")]
        file: Option<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "file")]
        check: Option<Vec<PathBuf>>,
    },
    /// List applicable moves, or apply a move sequence and print the result.
    Moves {
        file: PathBuf,
        #[arg(long, value_name = "MOVES")]
        apply: Option<PathBuf>,
    },
    /// Random walk of uniformly chosen moves.
    Walk {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the endpoint triangulation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest move sequence between two triangulations.
    Search {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
        /// Also print the move-count bound with this constant.
        #[arg(long, value_name = "A")]
        show_bound: Option<u64>,
    },
    /// All triangulations within a number of moves.
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
    },
    /// The tower bound for tetrahedron counts `p` and `q`.
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 200)]
        a: u64,
        /// Compare the bound with this number.
        #[arg(long, value_name = "N")]
        cmp: Option<BigUint>,
    },
    /// Integral homology groups.
    Homology {
        file: PathBuf,
        /// Also homology relative to the boundary.
        #[arg(long)]
        rel: bool,
        /// Also the map from boundary homology.
        #[arg(long)]
        peripheral: bool,
    },
    /// Vertex or fundamental normal surfaces.
    Nsenum {
        file: PathBuf,
        #[command(flatten)]
        kind: NsKind,
        /// Keep only surfaces with every coordinate at most this.
        #[arg(long = "box", value_name = "B")]
        box_bound: Option<u64>,
    },
    /// Describe the normal surface with the given coordinates.
    Nsinfo { file: PathBuf, coords: PathBuf },
    /// Sum of two normal surfaces with its additivity check.
    Nssum { file: PathBuf, x: PathBuf, y: PathBuf },
    /// Write a normal surface as a sum of fundamental ones.
    Nsdecompose { file: PathBuf, x: PathBuf },
    /// Euler characteristic and disc count bounds for fundamental surfaces.
    Nsbounds { file: PathBuf },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct NsKind {
    #[arg(long)]
    vertex: bool,
    #[arg(long)]
    fundamental: bool,
}

/// Exit status and text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Facts gathered by a command, printed as `key: value` or, under
/// `--porcelain`, `key<TAB>value`. Repeated keys are allowed.
#[derive(Default)]
struct Report {
    lines: Vec<(String, String)>,
    /// Human-only text replacing the key-value listing.
    raw: Option<String>,
}

impl Report {
    fn add(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn render(&self, porcelain: bool) -> String {
        if !porcelain {
            if let Some(raw) = &self.raw {
                return raw.clone();
            }
        }
        let sep = if porcelain { "\t" } else { ": " };
        self.lines.iter().map(|(k, v)| format!("{k}{sep}{v}\n")).collect()
    }
}

enum Failure {
    Invalid(String),
}

type Res = Result<(Report, i32), Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_tri(path: &Path) -> Result<Triangulation, Failure> {
    parse_tri(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_manifold(path: &Path) -> Result<Manifold, Failure> {
    Manifold::new(load_tri(path)?)
        .map_err(|r| invalid(format!("{}: {}", path.display(), r.verdict.as_str())))
}

fn load_coords(path: &Path, m: &Manifold) -> Result<Vec<u64>, Failure> {
    let x = parse_nsc(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    if x.len() != 7 * m.size() {
        return Err(invalid(format!(
            "{}: {}",
            path.display(),
            NormalError::Length {
                expected: 7 * m.size(),
                found: x.len()
            }
        )));
    }
    Ok(x)
}

fn coords_text(x: &[u64]) -> String {
    x.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((report, code)) => Outcome {
            code,
            stdout: report.render(cli.porcelain),
            stderr: String::new(),
        },
        Err(Failure::Invalid(msg)) => Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cmd: &Command) -> Res {
    match cmd {
        Command::Validate { file } => cmd_validate(file),
        Command::Skeleton { file } => cmd_skeleton(file),
        Command::Isosig { file, check } => cmd_isosig(file.as_deref(), check.as_deref()),
        Command::Moves { file, apply } => cmd_moves(file, apply.as_deref()),
        Command::Walk { file, steps, seed, out } => cmd_walk(file, *steps, *seed, out.as_deref()),
        Command::Search {
            a,
            b,
            max_depth,
            max_states,
            show_bound,
        } => cmd_search(a, b, *max_depth, *max_states, *show_bound),
        Command::Explore {
            file,
            radius,
            max_states,
        } => cmd_explore(file, *radius, *max_states),
        Command::Bound { p, q, a, cmp } => cmd_bound(*p, *q, *a, cmp.as_ref()),
        Command::Homology { file, rel, peripheral } => cmd_homology(file, *rel, *peripheral),
        Command::Nsenum { file, kind, box_bound } => cmd_nsenum(file, kind.vertex, *box_bound),
        Command::Nsinfo { file, coords } => cmd_nsinfo(file, coords),
        Command::Nssum { file, x, y } => cmd_nssum(file, x, y),
        Command::Nsdecompose { file, x } => cmd_nsdecompose(file, x),
        Command::Nsbounds { file } => cmd_nsbounds(file),
    }
}

fn cmd_validate(file: &Path) -> Res {
    let tri = load_tri(file)?;
    let v = validate(&tri);
    let mut r = Report::default();
    for c in &v.checks {
        let status = if c.passed { "ok" } else { "fail" };
        if c.detail.is_empty() {
            r.add(c.name, status);
        } else {
            r.add(c.name, format!("{status} ({})", c.detail));
        }
    }
    r.add("verdict", v.verdict.as_str());
    let code = if v.verdict == Verdict::NotManifold { 1 } else { 0 };
    Ok((r, code))
}

fn cmd_skeleton(file: &Path) -> Res {
    let tri = load_tri(file)?;
    let s = skeleton(&tri);
    let mut r = Report::default();
    r.add("tetrahedra", s.tet_count);
    r.add("vertices", s.vertex_count);
    r.add("edges", s.edge_count);
    r.add("faces", s.face_count);
    r.add("boundary_faces", s.boundary_face_count);
    r.add("euler_characteristic", s.euler_characteristic);
    r.add("orientable", flag(tri.is_orientable()));
    let degrees: Vec<String> = s.edge_degrees.iter().map(usize::to_string).collect();
    r.add("edge_degrees", degrees.join(" "));
    let links: Vec<&str> = s.vertex_link_types.iter().map(|l| l.name()).collect();
    r.add("vertex_links", links.join(" "));
    if Manifold::new(tri.clone()).is_ok() {
        for c in boundary_components(&tri) {
            let name = match (c.euler_characteristic, c.orientable) {
                (2, true) => "sphere".to_string(),
                (0, true) => "torus".to_string(),
                (1, false) => "projective plane".to_string(),
                (0, false) => "klein bottle".to_string(),
                (chi, o) => format!("chi {chi} {}", if o { "orientable" } else { "non-orientable" }),
            };
            r.add("boundary", format!("{name} ({} faces)", c.faces.len()));
        }
    }
    Ok((r, 0))
}

fn cmd_isosig(file: Option<&Path>, check: Option<&[PathBuf]>) -> Res {
    let mut r = Report::default();
    if let Some([a, b]) = check {
        let sa = canonical_signature(&load_tri(a)?);
        let sb = canonical_signature(&load_tri(b)?);
        let same = sa == sb;
        r.add("isomorphic", flag(same));
        r.add("a", &sa);
        r.add("b", &sb);
        return Ok((r, if same { 0 } else { 1 }));
    }
    let sig = canonical_signature(&load_tri(file.expect("clap requires a file"))?);
    r.raw = Some(format!("{sig}\n"));
    r.add("isosig", sig);
    Ok((r, 0))
}

fn cmd_moves(file: &Path, apply: Option<&Path>) -> Res {
    let m = load_manifold(file)?;
    let mut r = Report::default();
    match apply {
        None => {
            let sites = enumerate_moves(&m);
            r.raw = Some(write_moves(&sites));
            r.add("count", sites.len());
            for s in &sites {
                r.add("move", s);
            }
        }
        Some(path) => {
            let seq = parse_moves(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let out = apply_moves(&m, &seq).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let text = write_tri(out.triangulation());
            r.raw = Some(text.clone());
            r.add("applied", seq.len());
            r.add("tetrahedra", out.size());
            r.add("isosig", canonical_signature(out.triangulation()));
            for line in text.lines() {
                r.add("tri", line);
            }
        }
    }
    Ok((r, 0))
}

fn cmd_walk(file: &Path, steps: usize, seed: u64, out: Option<&Path>) -> Res {
    let m = load_manifold(file)?;
    let (end, path) = random_walk(&m, steps, seed);
    if let Some(o) = out {
        std::fs::write(o, write_tri(end.triangulation())).map_err(|e| invalid(format!("{}: {e}", o.display())))?;
    }
    let mut r = Report::default();
    r.add("seed", seed);
    r.add("steps", path.len());
    for s in &path {
        r.add("move", s);
    }
    r.add("tetrahedra", end.size());
    r.add("isosig", canonical_signature(end.triangulation()));
    Ok((r, 0))
}

fn cmd_search(a: &Path, b: &Path, max_depth: usize, max_states: usize, show_bound: Option<u64>) -> Res {
    let ma = load_manifold(a)?;
    let mb = load_manifold(b)?;
    let res = connect(&ma, &mb, max_depth, max_states);
    let mut r = Report::default();
    r.add("status", res.status.as_str());
    r.add("length", res.path.len());
    for s in &res.path {
        r.add("move", s);
    }
    r.add("explored", res.explored);
    r.add("depth_reached", res.depth_reached);
    if let Some(k) = show_bound {
        let (p, q) = (ma.size() as u64, mb.size() as u64);
        r.add("bound", render_bound(p, q, k));
        r.add("bound_value", theorem_bound(p, q, k));
        let cmp = tower_cmp(&theorem_bound(p, q, k), &BigUint::from(res.path.len()));
        r.add("bound_vs_length", ordering_word(cmp));
    }
    let code = if res.status == SearchStatus::Connected { 0 } else { 1 };
    Ok((r, code))
}

fn cmd_explore(file: &Path, radius: usize, max_states: usize) -> Res {
    let m = load_manifold(file)?;
    let c = explore(&m, radius, max_states);
    let mut r = Report::default();
    r.add("radius", radius);
    r.add("complete", flag(c.complete));
    r.add("states", c.states.len());
    for (sig, d) in &c.states {
        r.add("state", format!("{d} {sig}"));
    }
    Ok((r, if c.complete { 0 } else { 1 }))
}

fn ordering_word(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "greater",
    }
}

fn cmd_bound(p: u64, q: u64, a: u64, cmp: Option<&BigUint>) -> Res {
    if p == 0 || q == 0 || a == 0 {
        return Err(invalid("p, q and a must be positive"));
    }
    let b = theorem_bound(p, q, a);
    let mut r = Report::default();
    r.add("bound", render_bound(p, q, a));
    r.add("value", &b);
    if let Some(n) = cmp {
        r.add("cmp", ordering_word(tower_cmp(&b, n)));
    }
    Ok((r, 0))
}

fn add_groups(r: &mut Report, prefix: &str, groups: &[HomologyGroup; 4]) {
    for (k, g) in groups.iter().enumerate() {
        r.add(&format!("{prefix}{k}"), g);
    }
}

fn cmd_homology(file: &Path, rel: bool, peripheral: bool) -> Res {
    let m = load_manifold(file)?;
    let mut r = Report::default();
    add_groups(&mut r, "H", &homology_groups(&m));
    if rel {
        add_groups(&mut r, "H_rel", &relative_homology(&m));
    }
    if peripheral {
        let p = peripheral_map(&m).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
        let e = exactness_check(&m).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
        r.add("boundary_h1_rank", p.source_rank);
        r.add("image_rank", p.image_rank);
        r.add("h1_rank", p.target_rank);
        r.add("surjective", flag(p.surjective));
        r.add("rel_h2_rank", e.rel_h2_rank);
        r.add("torus_components", e.torus_components);
        r.add("torus_rank_ok", flag(e.torus_rank_ok));
        r.add("exact_sequence", e.note);
    }
    Ok((r, 0))
}

fn cmd_nsenum(file: &Path, vertex: bool, box_bound: Option<u64>) -> Res {
    let m = load_manifold(file)?;
    let mut list = if vertex {
        enumerate_vertex_solutions(&m)
    } else {
        enumerate_fundamental_solutions(&m, box_bound)
    };
    if let Some(b) = box_bound {
        list.retain(|x| x.iter().all(|&v| v <= b));
    }
    let mut r = Report::default();
    r.add("kind", if vertex { "vertex" } else { "fundamental" });
    r.add("count", list.len());
    for x in &list {
        r.add("surface", coords_text(x));
    }
    Ok((r, 0))
}

fn cmd_nsinfo(file: &Path, coords: &Path) -> Res {
    let m = load_manifold(file)?;
    let x = load_coords(coords, &m)?;
    let s = pachner_core::build_surface(&m, &x).map_err(|e| invalid(format!("{}: {e}", coords.display())))?;
    let mut r = Report::default();
    r.add("coords", coords_text(&x));
    r.add("discs", s.disc_count());
    r.add("components", s.components.len());
    for c in &s.components {
        r.add("component", format!("{} (chi {}, {} discs{})", c.name(), c.euler_characteristic, c.discs, if c.two_sided { "" } else { ", one-sided" }));
    }
    r.add("euler_characteristic", s.euler_characteristic);
    r.add("weight", s.weight);
    r.add("orientable", flag(s.orientable));
    r.add("two_sided", flag(s.two_sided));
    r.add("boundary_curves", s.boundary_curves);
    r.add("vertex_link", flag(s.vertex_link));
    let vs = is_vertex_surface(&m, &x).map_err(invalid)?;
    r.add("vertex_surface", flag(vs));
    Ok((r, 0))
}

fn cmd_nssum(file: &Path, x: &Path, y: &Path) -> Res {
    let m = load_manifold(file)?;
    let a = load_coords(x, &m)?;
    let b = load_coords(y, &m)?;
    let mut r = Report::default();
    match verify_additivity(&m, &a, &b) {
        Ok(rep) => {
            r.add("compatible", "yes");
            r.add("sum", coords_text(&rep.sum));
            r.add("chi", format!("{} + {} = {}", rep.chi[0], rep.chi[1], rep.chi[2]));
            r.add("weight", format!("{} + {} = {}", rep.weight[0], rep.weight[1], rep.weight[2]));
            r.add("additive", "yes");
            Ok((r, 0))
        }
        Err(HakenError::Incompatible { tet }) => {
            r.add("compatible", "no");
            r.add("conflict_tetrahedron", tet);
            Ok((r, 1))
        }
        Err(HakenError::NotAdditive { chi, weight }) => {
            r.add("compatible", "yes");
            r.add("chi", format!("{} + {} vs {}", chi[0], chi[1], chi[2]));
            r.add("weight", format!("{} + {} vs {}", weight[0], weight[1], weight[2]));
            r.add("additive", "no");
            Ok((r, 1))
        }
        Err(e) => Err(invalid(e)),
    }
}

fn cmd_nsdecompose(file: &Path, x: &Path) -> Res {
    let m = load_manifold(file)?;
    let v = load_coords(x, &m)?;
    let fundamentals = enumerate_fundamental_solutions(&m, None);
    let t = m.size();
    let mut r = Report::default();
    match decompose(&m, &v, &fundamentals) {
        Ok(d) => {
            for (part, k) in &d.parts {
                r.add("part", format!("{k} x {}", coords_text(part)));
            }
            r.add("summands", d.summands());
            r.add("summand_bound", format!("2^{}", 20 * t));
            r.add(
                "within_bound",
                flag(pachner_core::haken::at_most_power_of_two(d.summands(), 20 * t)),
            );
            Ok((r, 0))
        }
        Err(HakenError::NoDecomposition) => {
            r.add("decomposable", "no");
            Ok((r, 1))
        }
        Err(e) => Err(invalid(e)),
    }
}

fn cmd_nsbounds(file: &Path) -> Res {
    let m = load_manifold(file)?;
    let fundamentals = enumerate_fundamental_solutions(&m, None);
    let b = check_bounds_of(&m, &fundamentals).map_err(invalid)?;
    let t = b.tetrahedra;
    let mut r = Report::default();
    r.add("tetrahedra", t);
    r.add("fundamentals", b.fundamentals);
    r.add("max_neg_twice_chi", b.max_neg_twice_chi);
    r.add("chi_bound", format!("2^{}", 20 * t));
    r.add("chi_ok", flag(b.chi_ok));
    r.add("max_discs", b.max_discs);
    r.add("disc_bound", format!("2^{}", 40 * t));
    r.add("discs_ok", flag(b.discs_ok));
    r.add("sum_discs_ok", flag(b.sum_discs_ok));
    Ok((r, if b.holds() { 0 } else { 1 }))
}
