//! One function per subcommand. Each reads its settings from the merged
//! config, writes artifacts under the output directory and returns the
//! JSON report.

use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;
use sobext::bvp::counterexamples::membership_scan;
use sobext::bvp::counterexamples::{degiorgi_component, meyers_field, radial_power};
use sobext::bvp::fem::FemSpace;
use sobext::bvp::{
    degiorgi_case, fem_error, mazya_scan, mazya_theta, mazya_threshold, meyers_case, solve_mixed, CoefficientTensor,
    DistanceFn, Load, WeakProblem, SOLVER_TOL,
};
use sobext::extension::glue::MISMATCH_GROWTH;
use sobext::extension::{glue, ExtensionPlan, GlueVerdict, JonesExtension, JwExtension};
use sobext::funcspace::{besov_norm, AnalyticField, BesovJet, Field, GridField, GridSpec, ScanVerdict};
use sobext::geometry::{
    koch_dimension, koch_prefractal, koch_root, verify_exact, whitney_decompose, BoundaryComplement, Domain, DomainRef,
    Rect, RootLattice, DEFAULT_SEARCH_FACTOR,
};
use sobext::io::{
    parse_cloud, parse_domain, write_cover_csv, write_cover_rects, write_grid, write_jet_csv, NormRecord, Report,
    RunConfig, Verdict,
};
use sobext::trace::restrict_jet;
use sobext::{Error, Point, Result};

use crate::fields::parse_field;

/// A finished command: its report, and whether a failed verdict counts as
/// a violated invariant (exit 2) or as a measured outcome (exit 0).
pub struct Outcome {
    pub report: Report,
    pub strict: bool,
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn dump_grid<const N: usize>(out: &Path, name: &str, g: &GridField<N>) -> Result<()> {
    let mut w = create(out, name)?;
    write_grid(&mut w, g)
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn first_p(cfg: &RunConfig, default: f64) -> f64 {
    cfg.p.first().copied().unwrap_or(default)
}

fn grids_or(cfg: &RunConfig, default: &[usize]) -> Vec<usize> {
    if cfg.grids.is_empty() {
        default.to_vec()
    } else {
        cfg.grids.clone()
    }
}

/// Whitney cover, exact certification of the distance bounds, neighbor
/// ratios.
pub fn whitney(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.domain.as_deref().unwrap_or("square");
    let (domain, mut lat) = parse_domain(spec)?;
    if let Some([x, y, s]) = cfg.root {
        lat = RootLattice::cube([x, y], s);
    }
    let jmax = cfg.jmax.unwrap_or(6);
    let cover = whitney_decompose(domain.as_ref(), lat, jmax)?;
    write_cover_csv(create(out, "cover.csv")?, &cover)?;
    write_cover_rects(create(out, "cover_rects.csv")?, &cover)?;
    let stats = cover.stats();
    let mut verdicts = vec![
        Verdict::at_least("neighbor side ratio >= 1/4", stats.min_neighbor_ratio, 0.25),
        Verdict::at_most("neighbor side ratio <= 4", stats.max_neighbor_ratio, 4.0),
        Verdict::holds("cube interiors are pairwise disjoint", cover.interiors_disjoint()),
    ];
    let exact = verify_exact(&cover, domain.as_ref());
    if let Some(r) = &exact {
        verdicts.push(Verdict::at_most(
            "cubes with dist < sqrt(n) l (exact arithmetic)",
            r.lower_violations as f64,
            0.0,
        ));
        verdicts.push(Verdict::at_most(
            "non-truncated cubes with dist > 4 sqrt(n) l (exact arithmetic)",
            r.upper_violations as f64,
            0.0,
        ));
        // float distances, so allow rounding at the endpoints
        verdicts.push(Verdict::at_least(
            "min dist(Q, boundary) / side >= sqrt(2)",
            r.min_ratio,
            SQRT_2 * (1.0 - 1e-12),
        ));
        verdicts.push(Verdict::at_most(
            "max dist(Q, boundary) / side <= 4 sqrt(2)",
            r.max_ratio,
            4.0 * SQRT_2 * (1.0 + 1e-12),
        ));
    }
    let data = json!({
        "domain": spec,
        "kind": domain.kind(),
        "j_max": jmax,
        "stats": stats,
        "exact": exact,
        "dist_ratio_bounds": [SQRT_2, 4.0 * SQRT_2],
    });
    Ok(Outcome {
        report: Report::new("whitney", verdicts, data)?,
        strict: true,
    })
}

/// Root cube four times the domain's extent, placed so the domain sits in
/// its middle quarter.
fn extension_root(domain: &dyn Domain<2>) -> (RootLattice<2>, [f64; 2], [f64; 2]) {
    let b = domain.bounding_box();
    let ext = (b.hi[0] - b.lo[0]).max(b.hi[1] - b.lo[1]);
    let lat = RootLattice::cube([b.lo[0] - ext, b.lo[1] - ext], 4.0 * ext);
    let pad = 0.25 * ext;
    (lat, [b.lo[0] - pad, b.lo[1] - pad], [b.hi[0] + pad, b.hi[1] + pad])
}

/// Smallest level whose cubes have side at most `target`.
fn level_for(root_side: f64, target: f64) -> u32 {
    (root_side / target).log2().ceil().max(2.0) as u32
}

/// `‖Λ_k u‖ / ‖u‖` over a grid ladder; the Whitney depth follows the grid
/// so the finest cubes stay below `h/4`.
pub fn extend(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let spec = cfg.domain.as_deref().unwrap_or("lshape");
    let (domain, _) = parse_domain(spec)?;
    let u = parse_field(cfg.field.as_deref().unwrap_or("sinsin"))?;
    let k = cfg.k.unwrap_or(1);
    let ps = if cfg.p.is_empty() { vec![2.0] } else { cfg.p.clone() };
    let grids = grids_or(cfg, &[32, 64, 128]);
    let (eps, delta) = (cfg.eps.unwrap_or(0.5), cfg.delta.unwrap_or(1.0));
    let search = cfg.param.unwrap_or(DEFAULT_SEARCH_FACTOR);
    let (mut lat, lo, hi) = extension_root(domain.as_ref());
    if let Some([x, y, s]) = cfg.root {
        lat = RootLattice::cube([x, y], s);
    }
    let mut rows = Vec::new();
    let mut ratios = vec![Vec::new(); ps.len()];
    for (gi, &g) in grids.iter().enumerate() {
        let h = 1.0 / g as f64;
        let jmax = cfg.jmax.unwrap_or_else(|| level_for(lat.side_at(0), h / 4.0));
        let plan = ExtensionPlan::new(domain.clone(), lat, jmax, k, eps, delta, search)?;
        let ext = JonesExtension::new(&plan, &u)?;
        let grid = GridSpec::from_box(lo, hi, h)?;
        for (pi, &p) in ps.iter().enumerate() {
            let r = sobext::extension::norm_ratio(&ext, &grid, p, plan.collar())?;
            ratios[pi].push(r.ratio);
            rows.push(json!({
                "h": h,
                "j_max": jmax,
                "reflection_constant": plan.reflection.realized_constant,
                "norm": r,
            }));
        }
        if gi + 1 == grids.len() {
            dump_grid(out, "extension.grid", &ext.sample(&grid)?)?;
        }
    }
    let verdicts = ps
        .iter()
        .zip(&ratios)
        .map(|(p, r)| {
            let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = r.iter().copied().fold(0.0, f64::max);
            Verdict::at_most(
                format!("norm ratio (k={k}, p={p}) varies < 10% across the ladder"),
                hi / lo - 1.0,
                0.10,
            )
        })
        .collect();
    let data = json!({
        "domain": spec,
        "field": u.name,
        "k": k,
        "eps": eps,
        "delta": delta,
        "search_factor": search,
        "rows": rows,
    });
    Ok(Outcome {
        report: Report::new("extend", verdicts, data)?,
        strict: true,
    })
}

fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Jets recovered from ball averages, either of the field itself (`direct`)
/// or of its extension from the cloud (`jw`).
pub fn trace(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let cloud_spec = cfg.cloud.as_deref().unwrap_or("koch:5");
    let cloud = Arc::new(parse_cloud(cloud_spec)?);
    let u = parse_field(cfg.field.as_deref().unwrap_or("expcos"))?;
    let k = cfg.k.unwrap_or(1);
    let mode = cfg.mode.as_deref().unwrap_or("direct");
    let grids = grids_or(cfg, &[10, 20, 40]);
    let exact = BesovJet::from_field(cloud.clone(), &u, k, 1e-5);
    let snowflake: Option<DomainRef<2>> = match (mode, cloud_spec.split_once(':')) {
        ("direct", _) => None,
        ("jw", Some(("koch", l))) => {
            let level: u32 = l.parse().map_err(|_| Error::Config("bad koch level".into()))?;
            Some(Arc::new(koch_prefractal(level)?.0))
        }
        ("jw", _) => return config_err("jw mode needs a koch cloud"),
        _ => return config_err(format!("unknown trace mode '{mode}'")),
    };
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut last = None;
    for &g in &grids {
        let r = 1.0 / g as f64;
        let h = r / 8.0;
        let rep = match &snowflake {
            None => restrict_jet(&u, cloud.clone(), k, &[r, r / 2.0], h)?,
            Some(poly) => {
                let f = BoundaryComplement { inner: poly.clone() };
                let cover = whitney_decompose(&f, koch_root(), level_for(koch_root().side_at(0), h / 2.0))?;
                let e = JwExtension::new(&exact, &cover)?;
                restrict_jet(&e, cloud.clone(), k, &[r, r / 2.0], h)?
            }
        };
        let err = relative_l2(&rep.jet.values, &exact.values);
        errors.push(err);
        rows.push(json!({"radius": r, "h": h, "relative_l2_error": err, "summary": rep.summary()}));
        last = Some(rep);
    }
    let rep = last.expect("at least one level");
    write_jet_csv(create(out, "jet.csv")?, &rep.jet)?;
    let mut verdicts = vec![
        Verdict::at_most(
            "relative L2 jet error at the finest level",
            *errors.last().unwrap(),
            0.05,
        ),
        Verdict::at_most("extrapolation residual at the finest level", rep.max_residual(), 0.05),
    ];
    if errors.len() > 1 {
        verdicts.push(Verdict::holds(
            "jet error does not increase under refinement",
            errors.windows(2).all(|w| w[1] <= w[0]),
        ));
    }
    let data = json!({"cloud": cloud_spec, "field": u.name, "k": k, "mode": mode, "rows": rows});
    Ok(Outcome {
        report: Report::new("trace", verdicts, data)?,
        strict: true,
    })
}

/// Besov norm of a field's jet on a cloud.
pub fn besov(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let cloud_spec = cfg.cloud.as_deref().unwrap_or("koch:4");
    let cloud = Arc::new(parse_cloud(cloud_spec)?);
    let u = parse_field(cfg.field.as_deref().unwrap_or("expcos"))?;
    let p = first_p(cfg, 2.0);
    // the trace index of W^{1,p} on a set of dimension d
    let s = cfg.s.unwrap_or(1.0 - (2.0 - cloud.dim) / p);
    let k = cfg.k.unwrap_or(s.floor() as usize + 1);
    let jmax = cfg.jmax.unwrap_or(6);
    let jet = BesovJet::from_field(cloud.clone(), &u, k, 1e-5);
    write_jet_csv(create(out, "jet.csv")?, &jet)?;
    let rep = besov_norm(&jet, s, p, jmax)?;
    let record = NormRecord {
        name: format!("besov({})", u.name),
        k,
        p,
        h: cloud.mesh(),
        value: rep.norm,
    };
    let verdicts = vec![Verdict::holds("Besov norm is finite", rep.norm.is_finite())];
    let data = json!({
        "cloud": cloud_spec,
        "dimension": cloud.dim,
        "koch_dimension": koch_dimension(),
        "s": s,
        "record": record,
        "report": rep,
    });
    Ok(Outcome {
        report: Report::new("besov", verdicts, data)?,
        strict: true,
    })
}

/// Glues an inner and an outer field and reports whether the result stays
/// bounded in `W^{k,p}`. The interface is the unit square's boundary, or
/// the line `x1 = 1/2` for the kink.
pub fn glue_cmd(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let mode = cfg.mode.as_deref().unwrap_or("matched");
    let k = cfg.k.unwrap_or(1);
    let p = first_p(cfg, 2.0);
    let grids = grids_or(cfg, &[16, 32, 64]);
    let square = Rect::<2>::unit();
    let half = Rect::new([f64::NEG_INFINITY; 2], [0.5, f64::INFINITY]);
    let (inner, outer, domain) = match mode {
        "matched" | "smooth" => {
            let u = AnalyticField::new("sin(x+2y)", |x: &Point<2>| (x[0] + 2.0 * x[1]).sin());
            (u.clone(), u, &square)
        }
        "jump" => (AnalyticField::constant(0.0), AnalyticField::constant(1.0), &square),
        "kink" => (
            AnalyticField::constant(0.0),
            AnalyticField::new("x1-1/2", |x: &Point<2>| x[0] - 0.5),
            &half,
        ),
        _ => return config_err(format!("unknown glue mode '{mode}'")),
    };
    let specs = grids
        .iter()
        .map(|&g| GridSpec::from_box([-1.0; 2], [2.0; 2], 1.0 / g as f64))
        .collect::<Result<Vec<_>>>()?;
    let (finest, rep) = glue(&inner, &outer, domain, &specs, k, p)?;
    dump_grid(out, "glued.grid", &finest)?;
    let growth = rep.growth.iter().copied().fold(0.0, f64::max);
    let verdicts = vec![Verdict {
        claim: format!("glued field stays bounded in W^{{{k},{p}}} (growth per halving below {MISMATCH_GROWTH})"),
        measured: growth,
        tolerance: MISMATCH_GROWTH,
        pass: rep.verdict == GlueVerdict::Matched,
    }];
    let data = json!({"mode": mode, "report": rep});
    Ok(Outcome {
        report: Report::new("glue", verdicts, data)?,
        strict: false,
    })
}

type Exact = Arc<dyn Fn(&Point<2>) -> f64 + Send + Sync>;

/// A manufactured problem on the unit square: `D`, load, exact solution.
fn manufactured(mode: &str) -> Result<(DistanceFn, Load, Option<Exact>)> {
    let none: DistanceFn = Arc::new(|_: &Point<2>| f64::INFINITY);
    Ok(match mode {
        "dirichlet" => (
            Arc::new(|x: &Point<2>| x[0].min(x[1]).min(1.0 - x[0]).min(1.0 - x[1])),
            Load::density(|x| 2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).sin()),
            Some(Arc::new(|x: &Point<2>| (PI * x[0]).sin() * (PI * x[1]).sin())),
        ),
        // u = cos(πy) x², D the left edge, conormal data elsewhere
        "mixed" => (
            Arc::new(|x: &Point<2>| x[0].abs()),
            Load::density(|x| (PI * PI * x[0] * x[0] - 2.0) * (PI * x[1]).cos()).with_boundary(|x, n| {
                2.0 * x[0] * (PI * x[1]).cos() * n[0] - PI * (PI * x[1]).sin() * x[0] * x[0] * n[1]
            }),
            Some(Arc::new(|x: &Point<2>| (PI * x[1]).cos() * x[0] * x[0])),
        ),
        "neumann" => (
            none,
            Load::density(|x| 2.0 * PI * PI * (PI * x[0]).cos() * (PI * x[1]).cos()),
            None,
        ),
        "incompatible" => (none, Load::density(|_| 1.0), None),
        _ => return config_err(format!("unknown solve problem '{mode}'")),
    })
}

/// Manufactured solutions on a ladder of square grids.
pub fn solve(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let mode = cfg.mode.as_deref().unwrap_or("mixed");
    let grids = grids_or(cfg, &[8, 16, 32]);
    let tensor = match cfg.tensor.as_deref().unwrap_or("identity") {
        "identity" => CoefficientTensor::identity(2, 1),
        t => return config_err(format!("manufactured problems use the identity tensor, not '{t}'")),
    };
    let (d, load, exact) = manufactured(mode)?;
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut worst_conormal = 0.0f64;
    let mut worst_trace = 0.0f64;
    for (gi, &g) in grids.iter().enumerate() {
        let h = 1.0 / g as f64;
        let space = FemSpace::new(&Rect::<2>::unit(), [0.0, 0.0], [1.0, 1.0], h, &d)?;
        let mut problem = WeakProblem::new(tensor.clone(), space, load.clone());
        problem.load_order = 4;
        let sol = solve_mixed(&problem)?;
        worst_conormal = worst_conormal.max(sol.diagnostics.conormal_residual);
        worst_trace = worst_trace.max(sol.diagnostics.d_trace);
        let l2 = exact
            .as_ref()
            .map(|u| fem_error(&sol.space, &sol.values, u.as_ref(), None).l2);
        if let Some(e) = l2 {
            errors.push(e);
        }
        rows.push(json!({"h": h, "l2_error": l2, "diagnostics": sol.diagnostics}));
        if gi + 1 == grids.len() {
            // nodes become the centers of a (g+1)^2 grid
            let mut lattice = vec![f64::NAN; (g + 1) * (g + 1)];
            for (i, &l) in sol.space.nodes.iter().enumerate() {
                lattice[l] = sol.values[i];
            }
            let mut vals = Vec::with_capacity(lattice.len());
            for ix in 0..=g {
                for iy in 0..=g {
                    vals.push(lattice[iy * (g + 1) + ix]);
                }
            }
            let spec = GridSpec {
                lo: [-0.5 * h; 2],
                h,
                dims: [g + 1; 2],
            };
            dump_grid(out, "solution.grid", &GridField::from_values(spec, 1, vals)?)?;
        }
    }
    let mut verdicts = vec![
        Verdict::at_most("conormal residual on every solve", worst_conormal, 10.0 * SOLVER_TOL),
        Verdict::at_most("solution on the Dirichlet collar", worst_trace, 0.0),
    ];
    if errors.len() > 1 {
        let worst = errors.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
        verdicts.push(Verdict::at_least("L2 error ratio per halving", worst, 3.5));
    }
    let data = json!({"problem": mode, "rows": rows});
    Ok(Outcome {
        report: Report::new("solve", verdicts, data)?,
        strict: true,
    })
}

/// Scan ladders double at every step.
fn dyadic(grids: Vec<usize>) -> Result<Vec<usize>> {
    if grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return config_err("counterexample grids must double at every step");
    }
    Ok(grids)
}

fn expected(p: f64, threshold: f64) -> ScanVerdict {
    if p < threshold {
        ScanVerdict::Converges
    } else {
        ScanVerdict::Diverges
    }
}

fn scan_verdicts(
    verdicts: &mut Vec<Verdict>,
    rows: &mut Vec<serde_json::Value>,
    ps: &[f64],
    threshold: f64,
    scan: impl Fn(f64) -> Result<sobext::funcspace::ScanReport>,
) -> Result<()> {
    for &p in ps {
        let rep = scan(p)?;
        let want = expected(p, threshold);
        verdicts.push(Verdict::holds(
            format!(
                "p = {p}: {} (threshold {threshold:.6})",
                if want == ScanVerdict::Converges {
                    "converges"
                } else {
                    "diverges"
                }
            ),
            rep.verdict == want,
        ));
        rows.push(json!({"p": p, "scan": rep}));
    }
    Ok(())
}

/// The three threshold examples.
pub fn counterexample(case: &str, cfg: &RunConfig, _out: &Path) -> Result<Outcome> {
    let mut verdicts = Vec::new();
    let mut extra = Vec::new();
    let data = match case {
        "meyers" => {
            let mu = cfg.param.unwrap_or(0.5);
            let grids = dyadic(grids_or(cfg, &[8, 16, 32, 64, 128]))?;
            let rep = meyers_case(mu, grids[0], grids.len(), &[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0])?;
            let thr = rep.scans.threshold;
            verdicts.push(Verdict::holds(
                "scan converges below and diverges above the threshold",
                rep.scans.split(),
            ));
            if grids.len() >= 4 {
                verdicts.push(Verdict::holds(
                    "verdicts agree on the two finest sub-ladders",
                    rep.scans.mesh_independent(),
                ));
            }
            verdicts.push(Verdict::at_most(
                "weak residual of the exact field",
                rep.weak_residual,
                1e-6,
            ));
            verdicts.push(Verdict::holds(
                "Galerkin W^{1,2} error decreases",
                rep.galerkin_monotone,
            ));
            let v = meyers_field(mu);
            let ps = if cfg.p.is_empty() {
                vec![3.0, 6.0]
            } else {
                cfg.p.clone()
            };
            scan_verdicts(&mut verdicts, &mut extra, &ps, thr, |p| {
                membership_scan(&[&v as &dyn Field<2>], 1, p, grids[0], grids.len())
            })?;
            json!({"case": "meyers", "report": rep, "requested": extra})
        }
        "degiorgi" => {
            let gamma = cfg.param.unwrap_or(1.2);
            let grids = dyadic(grids_or(cfg, &[8, 16, 32, 64]))?;
            let rep = degiorgi_case(gamma, grids[0], grids.len())?;
            verdicts.push(Verdict::holds(
                "scan converges below and diverges above the threshold",
                rep.scans.split(),
            ));
            if grids.len() >= 4 {
                verdicts.push(Verdict::holds(
                    "verdicts agree on the two finest sub-ladders",
                    rep.scans.mesh_independent(),
                ));
            }
            verdicts.push(Verdict::at_least(
                "sampled ellipticity",
                rep.ellipticity.sampled_min,
                1.0 - 1e-12,
            ));
            verdicts.push(Verdict::at_most("weak-identity residual", rep.weak_residual, 1e-6));
            let comps: Vec<AnalyticField<3>> = (0..3).map(|j| degiorgi_component(gamma, j)).collect();
            let refs: Vec<&dyn Field<3>> = comps.iter().map(|c| c as &dyn Field<3>).collect();
            scan_verdicts(&mut verdicts, &mut extra, &cfg.p, rep.scans.threshold, |p| {
                membership_scan(&refs, 1, p, grids[0], grids.len())
            })?;
            json!({"case": "degiorgi", "report": rep, "requested": extra})
        }
        "mazya" => {
            let eps = cfg.param.unwrap_or(0.1);
            let m = cfg.m.unwrap_or(2);
            let grids = dyadic(grids_or(cfg, &[4, 8, 16, 32]))?;
            let rep = mazya_scan::<4>(eps, m, grids[0], grids.len())?;
            verdicts.push(Verdict::holds(
                "scan converges below and diverges above the threshold",
                rep.scans.split(),
            ));
            if grids.len() >= 4 {
                verdicts.push(Verdict::holds(
                    "verdicts agree on the two finest sub-ladders",
                    rep.scans.mesh_independent(),
                ));
            }
            let thr = mazya_threshold(eps, 4);
            let v = radial_power::<4>(mazya_theta(eps, 4) + m as f64 - 2.0);
            scan_verdicts(&mut verdicts, &mut extra, &cfg.p, thr, |p| {
                membership_scan(&[&v as &dyn Field<4>], m, p, grids[0], grids.len())
            })?;
            json!({"case": "mazya", "report": rep, "requested": extra})
        }
        _ => return config_err(format!("unknown counterexample '{case}'")),
    };
    Ok(Outcome {
        report: Report::new("counterexample", verdicts, data)?,
        strict: true,
    })
}
