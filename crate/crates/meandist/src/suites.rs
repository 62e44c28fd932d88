//! Verification suites behind `meandist verify`.

use meandist_core::extremal::{bound_constants, k_delta, k_prime_delta, verify_limits, LimitBudgets};
use meandist_core::intrinsic::{ratio, DeltaMethod, RatioEstimate, SphereQuadrature};
use meandist_core::profiles::{
    affine_i, ell_d, functional_i, functional_i_via_h, maximize_i, minimize_i, rearrange, AffineProfileParams,
    Profile,
};
use meandist_core::sampling::{sample_direction, RngStream};
use meandist_core::{ConvexBody, Executor};

use crate::error::CliError;
use crate::report::ReportRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Bounds,
    Extremal,
    Profiles,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Extremal => "extremal",
            Suite::Profiles => "profiles",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub deltas: Vec<f64>,
    pub samples: u64,
    pub dirs: u64,
    pub knots: usize,
    pub iters: u64,
    pub seed: u64,
    pub streams: usize,
}

pub fn run_suite<E: Executor>(cfg: &VerifyConfig, exec: &E) -> Result<Vec<ReportRow>, CliError> {
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        match cfg.suite {
            Suite::Bounds => rows.extend(bounds_suite(d, cfg, exec)?),
            Suite::Extremal => rows.extend(extremal_suite(d, cfg, exec)?),
            Suite::Profiles => rows.extend(profiles_suite(d, cfg)?),
        }
    }
    Ok(rows)
}

/// Ten test bodies in dimension 2, 3 or 4. Random polytopes are drawn from
/// `seed`.
pub fn corpus(d: usize, seed: u64) -> Result<Vec<(String, ConvexBody)>, CliError> {
    let mut rng = RngStream::new(seed, d as u64);
    let mut random_polytope = |n: usize| -> Result<ConvexBody, CliError> {
        let pts = (0..n)
            .map(|_| {
                let r = 0.5 + rng.uniform();
                sample_direction(d, &mut rng, false).into_iter().map(|x| r * x).collect()
            })
            .collect();
        Ok(ConvexBody::vpolytope(pts)?)
    };
    let e = |k: usize| -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        v
    };
    let cross = || -> Vec<Vec<f64>> {
        (0..d).flat_map(|k| [e(k), e(k).iter().map(|x| -x).collect()]).collect()
    };
    let mut standard = vec![vec![0.0; d]];
    standard.extend((0..d).map(e));
    let stretched: Vec<f64> = (0..d).map(|k| 0.5 + k as f64).collect();

    let bodies: Vec<(&str, ConvexBody)> = match d {
        2 => vec![
            ("disc", ConvexBody::unit_ball(2)?),
            ("square", ConvexBody::unit_cube(2)?),
            ("equilateral_triangle", ConvexBody::regular_polygon(3, 1.0)?),
            ("right_triangle", ConvexBody::simplex(standard)?),
            ("pentagon", ConvexBody::regular_polygon(5, 1.0)?),
            ("hexagon", ConvexBody::regular_polygon(6, 1.0)?),
            ("ellipse", ConvexBody::ellipsoid(vec![0.0; 2], vec![2.0, 0.5])?),
            ("rectangle_3x1", ConvexBody::cuboid(vec![0.0; 2], vec![3.0, 1.0])?),
            ("random_polygon_a", random_polytope(8)?),
            ("random_polygon_b", random_polytope(12)?),
        ],
        3 | 4 => vec![
            ("ball", ConvexBody::unit_ball(d)?),
            ("cube", ConvexBody::unit_cube(d)?),
            ("standard_simplex", ConvexBody::simplex(standard)?),
            ("ellipsoid", ConvexBody::ellipsoid(vec![0.0; d], stretched.clone())?),
            ("box", ConvexBody::cuboid(vec![0.0; d], stretched.iter().map(|x| 2.0 * x).collect())?),
            ("cross_polytope", ConvexBody::vpolytope(cross())?),
            ("k_delta_half", k_delta(d, 0.5)?),
            ("k_prime_delta_half", k_prime_delta(d, 0.5)?),
            ("random_polytope_a", random_polytope(2 * d + 4)?),
            ("random_polytope_b", random_polytope(3 * d + 3)?),
        ],
        _ => return Err(CliError::Usage(format!("the body corpus covers d = 2, 3, 4; got {d}"))),
    };
    Ok(bodies.into_iter().map(|(n, b)| (n.to_string(), b)).collect())
}

/// `V₁` rule used by the sweeps: the midpoint grid in the plane, random
/// directions above.
pub fn sweep_quadrature(d: usize, dirs: u64, seed: u64) -> SphereQuadrature {
    if d == 2 {
        SphereQuadrature::Grid2d { n_angles: dirs }
    } else {
        SphereQuadrature::Mc { n_dirs: dirs, seed: seed ^ 0x5EED_D1E5 }
    }
}

pub fn corpus_ratio<E: Executor>(
    body: &ConvexBody,
    samples: u64,
    dirs: u64,
    seed: u64,
    streams: usize,
    exec: &E,
) -> Result<RatioEstimate, CliError> {
    let q = sweep_quadrature(body.dim(), dirs, seed);
    Ok(ratio(body, DeltaMethod::Mc { samples }, q, seed, streams, exec)?)
}

fn bounds_suite<E: Executor>(d: usize, cfg: &VerifyConfig, exec: &E) -> Result<Vec<ReportRow>, CliError> {
    let b = bound_constants(d)?;
    let mut rows = vec![ReportRow::new(
        "bounds",
        d,
        "diam_upper_new_vs_bp09",
        b.diam_upper_new,
        0.0,
        b.diam_upper_bp09,
        (b.diam_upper_new < b.diam_upper_bp09) == (d <= 4),
    )];
    for (i, (name, body)) in corpus(d, cfg.seed)?.iter().enumerate() {
        let r = corpus_ratio(body, cfg.samples, cfg.dirs, cfg.seed.wrapping_add(i as u64), cfg.streams, exec)?;
        let inside = r.value - 3.0 * r.std_error > b.lower && r.value + 3.0 * r.std_error < b.upper;
        rows.push(ReportRow::new("bounds", d, format!("ratio:{name}"), r.value, r.std_error, b.lower, inside));
    }
    Ok(rows)
}

fn extremal_suite<E: Executor>(d: usize, cfg: &VerifyConfig, exec: &E) -> Result<Vec<ReportRow>, CliError> {
    let budgets = LimitBudgets { samples: cfg.samples, dirs: cfg.dirs };
    let report = verify_limits(d, &cfg.deltas, budgets, cfg.seed, cfg.streams, exec)?;
    Ok(report
        .checks
        .iter()
        .map(|c| ReportRow::new("extremal", d, c.quantity, c.estimate, c.std_error, c.target, c.pass).at(c.delta))
        .collect())
}

fn profiles_suite(d: usize, cfg: &VerifyConfig) -> Result<Vec<ReportRow>, CliError> {
    let mut rows = Vec::new();
    let df = d as f64;
    let mut push = |q: &str, est: f64, target: f64, pass: bool| {
        rows.push(ReportRow::new("profiles", d, q, est, 0.0, target, pass));
    };

    let lower = (3.0 * df + 1.0) / (2.0 * (df + 1.0) * (2.0 * df + 1.0));
    let i0 = functional_i(&Profile::h0(d)?)?;
    push("I_h0", i0, lower, (i0 - lower).abs() <= 1e-7);
    let iu = functional_i(&Profile::uniform(d)?)?;
    push("I_uniform", iu, 1.0 / 3.0, (iu - 1.0 / 3.0).abs() <= 1e-9);

    let mut rng = RngStream::new(cfg.seed, 1000 + d as u64);
    let mut identity = 0.0f64;
    for k in 0..100 {
        let p = Profile::random(d, 3 + k % 17, true, &mut rng)?;
        identity = identity.max((functional_i(&p)? - functional_i_via_h(&p)?).abs());
    }
    push("I_identity_max_defect", identity, 0.0, identity <= 1e-7);

    let ramp = AffineProfileParams::new(d, 1.0, 1.0)?.profile()?;
    let tent = Profile::h0(d)?;
    let r = rearrange(&ramp)?;
    let knotwise = if r.knots().len() == tent.knots().len() {
        r.f_values().iter().zip(tent.f_values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    push("rearrange_ramp_is_tent", knotwise, 0.0, knotwise <= 1e-10);

    let (mut gain, mut idem, mut mass) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for k in 0..300 {
        let p = Profile::random(d, 3 + k % 23, false, &mut rng)?;
        let s = rearrange(&p)?;
        gain = gain.max(functional_i(&s)? - functional_i(&p)?);
        idem = idem.max(rearrange(&s)?.l1_distance(&s));
        mass = mass.max((s.mass() - p.mass()).abs());
    }
    push("rearrange_never_increases_I", gain, 0.0, gain <= 1e-12);
    push("rearrange_idempotent_l1", idem, 0.0, idem <= 1e-10);
    push("rearrange_mass_defect", mass, 0.0, mass <= 1e-10);

    let mut top = f64::NEG_INFINITY;
    for k in 0..=60 {
        top = top.max(ell_d(d, 10f64.powf(-3.0 + 0.1 * k as f64)));
    }
    push("affine_max_on_grid", top, 1.0 / 3.0, top < 1.0 / 3.0);
    let ramp_i = affine_i(&AffineProfileParams::new(d, 1.0, 1.0)?);
    let ramp_target = 2.0 * df / ((df + 1.0) * (2.0 * df + 1.0));
    push("affine_ramp", ramp_i, ramp_target, ramp_i == ramp_target);
    let p1 = AffineProfileParams::new(d, 1.0, 3.0)?;
    let q = functional_i(&p1.profile()?)?;
    push("affine_quadrature_p1", q, ell_d(d, 1.0), (q - ell_d(d, 1.0)).abs() <= 1e-7);

    let hi = maximize_i(d, cfg.knots, cfg.iters, cfg.seed)?;
    push("optimize_max", hi.value, 1.0 / 3.0, hi.value >= 1.0 / 3.0 - 1e-3);
    let lo = minimize_i(d, cfg.knots, cfg.iters, cfg.seed)?;
    let l1 = lo.profile.l1_distance(&tent);
    push("optimize_min", lo.value, lower, lo.value - lower <= 1e-3 && l1 <= 5e-2);
    Ok(rows)
}
