//! Acceptance suite: one PASS/FAIL line per criterion, then a nonzero exit
//! if any failed. Run with `cargo test -p sobext --test acceptance`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;
use std::time::Instant;

use sobext::bvp::counterexamples::{mazya_theta_abc, MARGIN};
use sobext::bvp::fem::FemSpace;
use sobext::bvp::{
    degiorgi_case, fem_error, mazya_scan, mazya_theta, mazya_threshold, meyers_case, solve_mixed, CoefficientTensor,
    DistanceFn, Load, WeakProblem, SOLVER_TOL,
};
use sobext::extension::{
    glue, norm_ratio, reproduction_error, small_cube_samples, support_diagnostics, ExtensionPlan, GlueVerdict,
    JonesExtension, JwExtension, LocalizedExtension, LocalizedPlan, Patch,
};
use sobext::funcspace::{AnalyticField, BesovJet, Field, GridSpec, PolynomialK};
use sobext::geometry::{
    koch_prefractal, koch_root, verify_exact, whitney_decompose, Aabb, AhlforsCloud, Ball, BoundaryComplement, Cusp,
    DomainRef, Polygon, Rect, RootLattice, DEFAULT_SEARCH_FACTOR,
};
use sobext::io::parse_domain;
use sobext::trace::restrict_jet;
use sobext::{Error, Point, Result};

struct Line {
    id: usize,
    pass: bool,
    detail: String,
}

fn line(id: usize, pass: bool, detail: impl Into<String>) -> Line {
    Line {
        id,
        pass,
        detail: detail.into(),
    }
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi / lo - 1.0
}

fn sinsin() -> AnalyticField<2> {
    AnalyticField::new("sinsin", |x: &Point<2>| (PI * x[0]).sin() * (PI * x[1]).sin())
}

fn expcos() -> AnalyticField<2> {
    AnalyticField::new("expcos", |x: &Point<2>| x[0].exp() * x[1].cos())
}

fn quad() -> AnalyticField<2> {
    AnalyticField::new("quad", |x: &Point<2>| x[0] * x[0] - 0.5 * x[1] + x[0] * x[1])
}

fn c1_whitney() -> Result<Line> {
    let mut notes = Vec::new();
    let mut pass = true;
    for spec in ["square", "lshape", "koch:4", "strip"] {
        let t = Instant::now();
        let (domain, lat) = parse_domain(spec)?;
        let cover = whitney_decompose(domain.as_ref(), lat, 8)?;
        let (rmin, rmax) = cover.neighbor_ratio_extremes();
        let exact = verify_exact(&cover, domain.as_ref());
        let secs = t.elapsed().as_secs_f64();
        let ok = exact.as_ref().is_some_and(|r| r.passed())
            && rmin >= 0.25
            && rmax <= 4.0
            && cover.interiors_disjoint()
            && secs < 5.0;
        pass &= ok;
        let (lo, hi) = exact
            .as_ref()
            .map(|r| (r.lower_violations, r.upper_violations))
            .unwrap_or((usize::MAX, usize::MAX));
        notes.push(format!(
            "{spec}: {} cubes, violations {lo}/{hi}, ratios [{rmin}, {rmax}], {secs:.2}s",
            cover.len()
        ));
    }
    Ok(line(1, pass, notes.join("; ")))
}

fn l_plan(k: usize) -> Result<ExtensionPlan<2>> {
    let l: DomainRef<2> = Arc::new(Polygon::l_shape());
    ExtensionPlan::new(
        l,
        RootLattice::cube([-1.0, -1.0], 4.0),
        8,
        k,
        0.5,
        1.0,
        DEFAULT_SEARCH_FACTOR,
    )
}

fn c2_reproduction() -> Result<Line> {
    let coeffs = [1.0, 0.5, -2.0, 3.0, 0.25, -1.5];
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for k in 1..=3 {
        let plan = l_plan(k)?;
        let terms = k * (k + 1) / 2;
        let q = PolynomialK {
            center: [0.3, 0.9],
            degree: k - 1,
            coeffs: coeffs[..terms].to_vec(),
        };
        let ext = JonesExtension::new(&plan, &q)?;
        let pts = small_cube_samples(&plan);
        let e = reproduction_error(&ext, &q, &pts)?;
        worst = worst.max(e);
        notes.push(format!("k={k}: {e:.2e} over {} points", pts.len()));
    }
    Ok(line(2, worst <= 1e-10, notes.join("; ")))
}

fn bump(center: Point<2>, radius: f64) -> AnalyticField<2> {
    AnalyticField::new("bump", move |x: &Point<2>| {
        let r2 = ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)) / (radius * radius);
        if r2 < 1.0 {
            (1.0 - 1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    })
}

/// Enlargement radii of `supp Λu` over `h = 1/32, 1/64, 1/128`, checking
/// along the way that `Λu = u` inside and that forced samples vanish.
fn support_ladder(center: Point<2>, radius: f64) -> Result<std::result::Result<(Vec<f64>, String), String>> {
    let sq: DomainRef<2> = Arc::new(Rect::<2>::unit());
    let ball = Ball { center, radius };
    let u = bump(center, radius);
    let mut radii = Vec::new();
    let mut forced = Vec::new();
    for (jm, h) in [(8u32, 1.0 / 32.0), (9, 1.0 / 64.0), (10, 1.0 / 128.0)] {
        let plan = ExtensionPlan::new(
            sq.clone(),
            RootLattice::cube([-1.0, -1.0], 4.0),
            jm,
            1,
            1.0,
            2.0,
            DEFAULT_SEARCH_FACTOR,
        )?;
        let ext = JonesExtension::new(&plan, &u)?;
        let grid = GridSpec::from_box([-0.5; 2], [1.5; 2], h)?;
        let g = ext.sample(&grid)?;
        let interior_ok = (0..grid.len())
            .filter(|&f| plan.domain.contains(&grid.center_flat(f)))
            .all(|f| g.values[f] == u.value(&grid.center_flat(f)));
        if !interior_ok {
            return Ok(Err(format!("h={h}: extension differs from u inside")));
        }
        let rep = match support_diagnostics(&ext, &grid, &ball) {
            Ok(r) => r,
            Err(e @ Error::SupportLeak { .. }) => return Ok(Err(e.to_string())),
            Err(e) => return Err(e),
        };
        radii.push(rep.enlargement_radius);
        forced.push(format!("{}/{}", rep.forced_zero, rep.exterior_samples));
    }
    Ok(Ok((radii, forced.join(", "))))
}

fn c3_support() -> Result<Line> {
    let mut pass = true;
    let mut notes = Vec::new();
    // the stated case, dist(supp u, ∂Ω) = 0.3, and a bump 0.05 from the
    // boundary whose support the extension does enlarge
    for (label, center) in [("dist 0.3", [0.5, 0.5]), ("dist 0.05", [0.5, 0.25])] {
        match support_ladder(center, 0.2)? {
            Ok((r, forced)) => {
                // h-independent up to one cell of the coarsest grid
                let ok = r.iter().all(|v| v.is_finite() && (v - r[0]).abs() <= 1.0 / 32.0);
                pass &= ok;
                notes.push(format!(
                    "{label}: radius {:.4}, {:.4}, {:.4}; forced zeros {forced}",
                    r[0], r[1], r[2]
                ));
            }
            Err(msg) => {
                pass = false;
                notes.push(format!("{label}: {msg}"));
            }
        }
    }
    Ok(line(3, pass, notes.join("; ")))
}

/// Norm ratios over `h = 1/32, 1/64, 1/128` with the Whitney depth tied
/// to `h` and the grid box the bounding box padded by a quarter extent.
fn ratio_ladder(domain: DomainRef<2>, u: &dyn Field<2>, p: f64, search: f64) -> Result<Vec<f64>> {
    let b = domain.bounding_box();
    let ext = (b.hi[0] - b.lo[0]).max(b.hi[1] - b.lo[1]);
    let lat = RootLattice::cube([b.lo[0] - ext, b.lo[1] - ext], 4.0 * ext);
    let pad = 0.25 * ext;
    let mut out = Vec::new();
    for i in 0..3 {
        let h = 1.0 / (32 << i) as f64;
        let jm = (lat.side_at(0) / (h / 4.0)).log2().ceil() as u32;
        let plan = ExtensionPlan::new(domain.clone(), lat, jm, 1, 0.5, 1.0, search)?;
        let e = JonesExtension::new(&plan, u)?;
        let grid = GridSpec::from_box([b.lo[0] - pad, b.lo[1] - pad], [b.hi[0] + pad, b.hi[1] + pad], h)?;
        out.push(norm_ratio(&e, &grid, p, plan.collar())?.ratio);
    }
    Ok(out)
}

fn c4_stability() -> Result<Line> {
    let mut notes = Vec::new();
    let mut pass = true;
    let domains: [(&str, DomainRef<2>); 2] = [
        ("square", Arc::new(Rect::<2>::unit())),
        ("lshape", Arc::new(Polygon::l_shape())),
    ];
    for (name, d) in domains {
        for u in [sinsin(), expcos(), quad()] {
            let r = ratio_ladder(d.clone(), &u, 2.0, DEFAULT_SEARCH_FACTOR)?;
            let s = spread(&r);
            pass &= s < 0.10;
            notes.push(format!("{name}/{}: {:.1}%", u.name, 100.0 * s));
        }
    }
    // cusp x2 < x1^9 on (0,1); u = 1/x1 lies in W^{1,3} there
    let cusp: DomainRef<2> = Arc::new(Cusp::new(9.0));
    let u = AnalyticField::new("1/x1", |x: &Point<2>| 1.0 / x[0]);
    let r = ratio_ladder(cusp, &u, 3.0, 1e4)?;
    let growth = r[2] / r[0];
    pass &= growth > 2.0;
    notes.push(format!(
        "cusp p=3: ratios {:.3}, {:.3}, {:.3}, growth {growth:.2}x",
        r[0], r[1], r[2]
    ));
    Ok(line(4, pass, notes.join("; ")))
}

fn c5_trace_of_extension() -> Result<Line> {
    let t = Instant::now();
    let (polygon, cloud) = koch_prefractal(5)?;
    let cloud = Arc::new(cloud);
    let f = BoundaryComplement {
        inner: Arc::new(polygon) as DomainRef<2>,
    };
    let u = AnalyticField::new("u", |x: &Point<2>| {
        (1.3 * x[0]).sin() * (0.7 * x[1]).exp() + x[0] * x[1]
    });
    let mut notes = Vec::new();
    let mut pass = true;
    for k in [1usize, 2] {
        let jet0 = BesovJet::from_field(cloud.clone(), &u, k, 1e-5);
        let norm0 = jet0.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut errs = Vec::new();
        for (jm, r) in [(8u32, 0.1), (9, 0.05), (10, 0.025)] {
            let cover = whitney_decompose(&f, koch_root(), jm)?;
            let ext = JwExtension::new(&jet0, &cover)?;
            let rep = restrict_jet(&ext, cloud.clone(), k, &[r, r / 2.0], r / 8.0)?;
            let d = rep
                .jet
                .values
                .iter()
                .zip(&jet0.values)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            errs.push(d / norm0);
        }
        pass &= errs[2] <= 0.05 && errs.windows(2).all(|w| w[1] < w[0]);
        notes.push(format!("k={k}: {:.4}, {:.4}, {:.4}", errs[0], errs[1], errs[2]));
    }
    let secs = t.elapsed().as_secs_f64();
    pass &= secs < 60.0;
    notes.push(format!("{secs:.1}s"));
    Ok(line(5, pass, notes.join("; ")))
}

/// Distance to the left, top and right sides of the unit square.
fn three_sides(x: &Point<2>) -> f64 {
    let (cx, cy) = (x[0].clamp(0.0, 1.0), x[1].clamp(0.0, 1.0));
    let left = (x[0]).hypot(x[1] - cy);
    let right = (x[0] - 1.0).hypot(x[1] - cy);
    let top = (x[0] - cx).hypot(x[1] - 1.0);
    left.min(right).min(top)
}

fn c6_localized() -> Result<Line> {
    let sq: DomainRef<2> = Arc::new(Rect::<2>::unit());
    let plan = Arc::new(ExtensionPlan::new(
        sq.clone(),
        RootLattice::cube([-1.0, -1.0], 4.0),
        7,
        1,
        1.0,
        2.0,
        DEFAULT_SEARCH_FACTOR,
    )?);
    let patches = vec![
        Patch {
            region: Rect::new([-1.0, -1.0], [0.75, 2.0]),
            plan: plan.clone(),
        },
        Patch {
            region: Rect::new([0.25, -1.0], [2.0, 2.0]),
            plan,
        },
    ];
    let samples: Vec<Point<2>> = (0..=40)
        .flat_map(|i| {
            let t = i as f64 / 40.0;
            [[0.0, t], [t, 1.0], [1.0, t]]
        })
        .collect();
    let lp = LocalizedPlan::new(
        sq,
        patches,
        0.2,
        Arc::new(three_sides),
        &samples,
        Aabb::new([-1.0, -1.0], [2.0, 2.0]),
        1.0 / 64.0,
    )?;
    // vanishes on D = bottom edge
    let u = AnalyticField::new("u", |x: &Point<2>| x[1] * x[0].exp() * (2.0 * x[1]).cos());
    let e = LocalizedExtension::new(&lp, &u)?;
    let mut restr = 0.0f64;
    for i in 0..40 {
        for j in 0..40 {
            let x = [(i as f64 + 0.5) / 40.0, (j as f64 + 0.5) / 40.0];
            let (v, w) = (e.eval(&x)?, u.value(&x));
            restr = restr.max((v - w).abs() / w.abs().max(1.0));
        }
    }
    let cloud = Arc::new(AhlforsCloud::segment([0.1, 0.0], [0.9, 0.0], 17)?);
    let mut traces = Vec::new();
    for i in 0..3 {
        let h = 1.0 / (32 << i) as f64;
        let r = 8.0 * h;
        let rep = restrict_jet(&e, cloud.clone(), 1, &[r, r / 2.0], h / 2.0)?;
        let t = rep.jet.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        traces.push((h, t));
    }
    let c = traces[0].1 / traces[0].0.sqrt();
    let bounded = traces
        .iter()
        .all(|&(h, t)| t <= 1e-6f64.max(c * h.sqrt()) * (1.0 + 1e-12));
    let pass = restr <= 1e-12 && bounded;
    Ok(line(
        6,
        pass,
        format!(
            "restriction error {restr:.1e}; trace on D {:.2e}, {:.2e}, {:.2e} against C h^1/2 with C = {c:.3}",
            traces[0].1, traces[1].1, traces[2].1
        ),
    ))
}

fn c7_glue() -> Result<Line> {
    let grids = [16, 32, 64]
        .iter()
        .map(|&g| GridSpec::from_box([-1.0; 2], [2.0; 2], 1.0 / g as f64))
        .collect::<Result<Vec<_>>>()?;
    let sq = Rect::<2>::unit();
    let smooth = AnalyticField::new("sin(x+2y)", |x: &Point<2>| (x[0] + 2.0 * x[1]).sin());
    let zero = AnalyticField::constant(0.0);
    let one = AnalyticField::constant(1.0);
    // a planar kink: zero left of x1 = 1/2, slope one to the right
    let half = Rect::new([f64::NEG_INFINITY; 2], [0.5, f64::INFINITY]);
    let ramp = AnalyticField::new("x1-1/2", |x: &Point<2>| x[0] - 0.5);
    let norms = |r: &sobext::extension::GlueReport| r.rows.iter().map(|x| x.norm).collect::<Vec<_>>();
    let min_growth = |r: &sobext::extension::GlueReport| r.growth.iter().copied().fold(f64::INFINITY, f64::min);
    // growth of exactly √2 is the expected rate, so allow rounding only
    let sqrt2 = SQRT_2 - 1e-9;

    let (_, m) = glue(&smooth, &smooth, &sq, &grids, 1, 2.0)?;
    let (_, j) = glue(&zero, &one, &sq, &grids, 1, 2.0)?;
    let (_, k1) = glue(&zero, &ramp, &half, &grids, 1, 2.0)?;
    let (_, k2) = glue(&zero, &ramp, &half, &grids, 2, 2.0)?;
    let pass = spread(&norms(&m)) < 0.05
        && m.verdict == GlueVerdict::Matched
        && min_growth(&j) >= sqrt2
        && spread(&norms(&k1)) < 0.05
        && k1.verdict == GlueVerdict::Matched
        && min_growth(&k2) >= sqrt2;
    Ok(line(
        7,
        pass,
        format!(
            "matched spread {:.2}%; jump growth {:.6}; kink k=1 spread {:.2}%, k=2 growth {:.6}",
            100.0 * spread(&norms(&m)),
            min_growth(&j),
            100.0 * spread(&norms(&k1)),
            min_growth(&k2)
        ),
    ))
}

fn c8_meyers() -> Result<Line> {
    let t = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for mu in [0.25, 0.5] {
        let rep = meyers_case(mu, 8, 5, &[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0])?;
        let thr = 2.0 / (1.0 - mu);
        let margin_ok = (rep.scans.p_below - thr * (1.0 - MARGIN)).abs() < 1e-12
            && (rep.scans.p_above - thr * (1.0 + MARGIN)).abs() < 1e-12
            && (rep.scans.threshold - thr).abs() < 1e-12;
        let ok = margin_ok && rep.scans.split() && rep.weak_residual <= 1e-6 && rep.galerkin_monotone;
        pass &= ok;
        notes.push(format!(
            "mu={mu}: threshold {thr}, split {}, weak residual {:.1e}, Galerkin monotone {}",
            rep.scans.split(),
            rep.weak_residual,
            rep.galerkin_monotone
        ));
    }
    let secs = t.elapsed().as_secs_f64();
    pass &= secs < 120.0;
    notes.push(format!("{secs:.1}s"));
    Ok(line(8, pass, notes.join("; ")))
}

fn c9_degiorgi() -> Result<Line> {
    let t = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for gamma in [1.2, 1.4] {
        let rep = degiorgi_case(gamma, 8, 4)?;
        let thr = 3.0 / gamma;
        let ok = (rep.scans.threshold - thr).abs() < 1e-12
            && rep.scans.split()
            && rep.ellipticity.sampled_min >= 1.0 - 1e-12
            && rep.weak_residual <= 1e-6;
        pass &= ok;
        notes.push(format!(
            "gamma={gamma}: threshold {thr:.4}, split {}, ellipticity {:.6}, weak residual {:.1e}",
            rep.scans.split(),
            rep.ellipticity.sampled_min,
            rep.weak_residual
        ));
    }
    let secs = t.elapsed().as_secs_f64();
    pass &= secs < 120.0;
    notes.push(format!("{secs:.1}s"));
    Ok(line(9, pass, notes.join("; ")))
}

fn c10_mazya() -> Result<Line> {
    let n = 4usize;
    let nf = n as f64;
    let mut pass = true;
    let mut thresholds = Vec::new();
    let mut notes = Vec::new();
    for eps in [1.0f64, 0.1, 0.01] {
        let closed = 2.0 - nf / 2.0 + nf * eps.sqrt() / (2.0 * (4.0 * (nf - 1.0).powi(2) + eps).sqrt());
        let general = mazya_theta_abc((nf - 2.0).powi(2) + eps, nf * (nf - 2.0), nf * nf, n);
        let theta = mazya_theta(eps, n);
        let arith = (theta - closed).abs().max((theta - general).abs());
        let rep = mazya_scan::<4>(eps, 2, 4, 4)?;
        let thr = mazya_threshold(eps, n);
        pass &= arith <= 1e-12 && rep.scans.split() && (rep.scans.threshold - nf / (2.0 - closed)).abs() < 1e-12;
        thresholds.push(thr);
        notes.push(format!(
            "eps={eps}: theta {theta:.6} (|diff| {arith:.1e}), threshold {thr:.4}, split {}",
            rep.scans.split()
        ));
    }
    pass &= thresholds.windows(2).all(|w| w[1] < w[0] && w[1] > 2.0);
    Ok(line(10, pass, notes.join("; ")))
}

/// L2 errors and the worst conormal residual over `h = 1/8, 1/16, 1/32`.
fn solve_ladder(d: DistanceFn, load: Load, exact: &(dyn Fn(&Point<2>) -> f64 + Sync)) -> Result<(Vec<f64>, f64)> {
    let mut errs = Vec::new();
    let mut conormal = 0.0f64;
    for g in [8usize, 16, 32] {
        let space = FemSpace::new(&Rect::<2>::unit(), [0.0, 0.0], [1.0, 1.0], 1.0 / g as f64, &d)?;
        let mut prob = WeakProblem::new(CoefficientTensor::identity(2, 1), space, load.clone());
        prob.load_order = 4;
        let sol = solve_mixed(&prob)?;
        conormal = conormal.max(sol.diagnostics.conormal_residual);
        errs.push(fem_error(&sol.space, &sol.values, &exact, None).l2);
    }
    Ok((errs, conormal))
}

fn c11_solve() -> Result<Line> {
    let dirichlet: DistanceFn = Arc::new(|x: &Point<2>| x[0].min(x[1]).min(1.0 - x[0]).min(1.0 - x[1]));
    let (ed, cd) = solve_ladder(
        dirichlet,
        Load::density(|x| 2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).sin()),
        &|x| (PI * x[0]).sin() * (PI * x[1]).sin(),
    )?;
    // D = left edge; conormal data on the other three sides
    let left: DistanceFn = Arc::new(|x: &Point<2>| x[0].abs());
    let (em, cm) = solve_ladder(
        left,
        Load::density(|x| (PI * PI * x[0] * x[0] - 2.0) * (PI * x[1]).cos())
            .with_boundary(|x, n| 2.0 * x[0] * (PI * x[1]).cos() * n[0] - PI * (PI * x[1]).sin() * x[0] * x[0] * n[1]),
        &|x| (PI * x[1]).cos() * x[0] * x[0],
    )?;
    let ratios = |e: &[f64]| e.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
    // pure Neumann with <f, 1> != 0 must be rejected
    let none: DistanceFn = Arc::new(|_: &Point<2>| f64::INFINITY);
    let space = FemSpace::new(&Rect::<2>::unit(), [0.0, 0.0], [1.0, 1.0], 1.0 / 8.0, &none)?;
    let incompatible = matches!(
        solve_mixed(&WeakProblem::new(
            CoefficientTensor::identity(2, 1),
            space,
            Load::density(|_| 1.0)
        )),
        Err(Error::Incompatible { .. })
    );
    let conormal = cd.max(cm);
    let pass = ratios(&ed) >= 3.5 && ratios(&em) >= 3.5 && incompatible && conormal <= 10.0 * SOLVER_TOL;
    Ok(line(
        11,
        pass,
        format!(
            "Dirichlet L2 ratio {:.3}; mixed L2 ratio {:.3}; incompatibility detected {incompatible}; conormal {conormal:.1e}",
            ratios(&ed),
            ratios(&em)
        ),
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Result<Line>); 11] = [
        (1, c1_whitney),
        (2, c2_reproduction),
        (3, c3_support),
        (4, c4_stability),
        (5, c5_trace_of_extension),
        (6, c6_localized),
        (7, c7_glue),
        (8, c8_meyers),
        (9, c9_degiorgi),
        (10, c10_mazya),
        (11, c11_solve),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, run) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let l = run().unwrap_or_else(|e| line(id, false, format!("error: {e}")));
        println!(
            "{} criterion {:>2}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.detail
        );
        failed += !l.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
