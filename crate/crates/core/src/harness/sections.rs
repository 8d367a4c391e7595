//! The theorem sections of a sweep. Each section compares every family
//! spectrum with every computed limit; convergence is judged over the grid
//! values inside `(0, 1)`.

use super::study::{label, Study};
use super::{Check, Section};
use crate::assembly::DiscreteForms;
use crate::error::Result;
use crate::heatzeta::{
    check_decay_bound, decay_horizon, heat_trace, kernel_l2_distance, kernel_l2_distance_quadrature, kernel_l2_profile, log_grid,
    trace_norm_profile, zeta_mellin, zeta_sum, HeatProfile, ZetaSample,
};
use crate::io::{heat_table, num, spectrum_table, zeta_table, Table};
use crate::linalg::{c, hermitian_eigenvalues};
use crate::spectra::{
    cluster, cluster_gap, constrained_spectrum, default_gap_tol, family_spectrum, kernel_dim, regularized_spectrum, Spectrum,
};

/// Eigenvalue indices gated by the spectral checks.
const GATED: usize = 10;
/// Fewest grid values from which convergence is asserted.
const MIN_POINTS: usize = 4;

fn point_count(study: &Study) -> Check {
    Check::at_least("s_points", study.trend().len() as f64, MIN_POINTS as f64)
}

fn s_value(spec: &Spectrum) -> String {
    num(spec.s.unwrap_or(f64::NAN))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Flags a relative disagreement of the final values of two strategies.
fn compare_finals(sec: &mut Section, what: &str, finals: &[(String, f64)], tol: f64, floor: f64) {
    if let [(ta, a), (tb, b)] = finals {
        let scale = a.abs().max(b.abs());
        if scale > floor && (a - b).abs() > tol * scale {
            sec.flags.push(format!("{what}: {ta} {a:e} and {tb} {b:e} disagree beyond {tol:e}"));
        }
    }
}

fn bits(m: &crate::linalg::CMat) -> Vec<u64> {
    m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect()
}

/// Eigenvalue table, deltas to each limit, kernel dimensions, strategy
/// agreement and mass invariance.
pub fn sweep_spectrum(study: &Study) -> Result<Section> {
    let cfg = &study.config;
    let tol = &cfg.tolerances;
    let depth = cfg.depth.min(study.forms.dim());
    let mut sec = Section::new("spectrum");
    sec.checks.push(point_count(study));

    for spec in study.all() {
        sec.table(format!("spectrum_{}.csv", label(spec)), spectrum_table(spec));
    }
    let all = study.all();
    let mut header = vec!["k".to_string()];
    header.extend(all.iter().map(|s| label(s)));
    let mut wide = Table { header, rows: Vec::new() };
    for k in 0..depth {
        let mut row = vec![(k + 1).to_string()];
        row.extend(all.iter().map(|s| num(s.eigenvalues[k])));
        wide.push(row);
    }
    sec.table("eigenvalues.csv", wide);

    let trend = study.trend();
    let mut deltas = Table::new(&["strategy", "s", "k", "delta", "relative_delta", "order"]);
    for limit in study.limits() {
        let tag = limit.strategy.tag();
        for k in 0..depth {
            let values: Vec<f64> = trend.iter().map(|sp| (sp.eigenvalues[k] - limit.eigenvalues[k]).abs()).collect();
            for (i, sp) in trend.iter().enumerate() {
                let order = if i == 0 {
                    String::new()
                } else {
                    let (s0, s1) = (trend[i - 1].s.unwrap_or(1.0), sp.s.unwrap_or(1.0));
                    num((values[i - 1] / values[i]).ln() / (s0 / s1).ln())
                };
                deltas.push(vec![
                    tag.into(),
                    s_value(sp),
                    (k + 1).to_string(),
                    num(values[i]),
                    num(values[i] / limit.eigenvalues[k].abs().max(1.0)),
                    order,
                ]);
            }
            if k < GATED {
                sec.checks.push(Check::decreasing(format!("delta_decreasing/{tag}/k={}", k + 1), &values, tol.eigen_floor));
                let last = values.last().copied().unwrap_or(f64::NAN);
                sec.checks.push(Check::at_most(
                    format!("final_relative_delta/{tag}/k={}", k + 1),
                    last / limit.eigenvalues[k].abs().max(1.0),
                    tol.eigen,
                ));
            }
        }
    }
    sec.table("deltas.csv", deltas);

    for spec in study.all() {
        let name = format!("kernel_dim/{}", label(spec));
        sec.checks.push(match kernel_dim(spec, tol.kernel) {
            Ok(l) => Check::equal(name, l as f64, 1.0),
            Err(_) => Check::failed(name),
        });
    }

    if let [a, b] = study.limits()[..] {
        let n = GATED.min(depth);
        let worst = (0..n).map(|k| rel(b.eigenvalues[k], a.eigenvalues[k])).fold(0.0, f64::max);
        sec.checks.push(Check::at_most("strategy_agreement", worst, tol.agreement));
        for k in n..depth {
            let d = rel(b.eigenvalues[k], a.eigenvalues[k]);
            if d > tol.agreement {
                sec.flags.push(format!("k={}: limit strategies differ by {d:e}", k + 1));
            }
        }
    }

    let reference = bits(&study.forms.mass());
    let differing = study.all().iter().filter(|s| bits(&s.mass) != reference).count();
    sec.checks.push(Check::equal("mass_invariance", differing as f64, 0.0));
    Ok(sec)
}

/// Gaps between the limit's cluster projectors and the family's projectors
/// on the same index ranges.
pub fn sweep_projections(study: &Study) -> Result<Section> {
    let cfg = &study.config;
    let tol = &cfg.tolerances;
    let mut sec = Section::new("projections");
    sec.checks.push(point_count(study));
    let mut table = Table::new(&["strategy", "cluster", "first_k", "last_k", "s", "gap"]);
    let mut finals: Vec<Vec<(String, f64)>> = Vec::new();
    for limit in study.limits() {
        let tag = limit.strategy.tag();
        let window = limit.truncated(cfg.depth);
        let clusters = match cluster(&window, default_gap_tol(&window)) {
            Ok(c) => c,
            Err(_) => {
                sec.checks.push(Check::failed(format!("clustering/{tag}")));
                continue;
            }
        };
        // a cluster touching the end of the window may be incomplete
        let complete = clusters.iter().filter(|c| c.last + 1 < window.len()).take(cfg.clusters);
        for (ci, cl) in complete.enumerate() {
            let mut trend_gaps = Vec::new();
            for sp in &study.family {
                let gap = cluster_gap(limit, sp, cl)?;
                table.push(vec![
                    tag.into(),
                    (ci + 1).to_string(),
                    (cl.first + 1).to_string(),
                    (cl.last + 1).to_string(),
                    s_value(sp),
                    num(gap),
                ]);
                if sp.s.is_some_and(|s| s < 1.0) {
                    trend_gaps.push(gap);
                }
            }
            let name = format!("{tag}/cluster={}", ci + 1);
            sec.checks.push(Check::decreasing(format!("gap_decreasing/{name}"), &trend_gaps, tol.projection_floor));
            let last = trend_gaps.last().copied().unwrap_or(f64::NAN);
            sec.checks.push(Check::at_most(format!("final_gap/{name}"), last, tol.projection));
            if finals.len() <= ci {
                finals.push(Vec::new());
            }
            finals[ci].push((tag.to_string(), last));
        }
    }
    for (ci, f) in finals.iter().enumerate() {
        compare_finals(&mut sec, &format!("final gap of cluster {}", ci + 1), f, tol.agreement, tol.projection_floor);
    }
    sec.table("projections.csv", table);
    Ok(sec)
}

/// Kernel dimension of the reference limit and the certified time grid
/// `t0 … t_max` shared by the heat, zeta and kernel sections.
pub(crate) fn heat_grid(study: &Study) -> Result<(usize, Vec<f64>)> {
    let cfg = &study.config;
    let ell = kernel_dim(study.reference(), cfg.tolerances.kernel)?;
    let t_max = decay_horizon(&study.all(), ell, cfg.heat.eps)?.max(cfg.heat.t0);
    Ok((ell, log_grid(cfg.heat.t0, t_max, cfg.heat.points)))
}

fn reduced_trace(spec: &Spectrum, ell: usize, t: f64) -> f64 {
    spec.eigenvalues.iter().skip(ell).map(|l| (-t * l).exp()).sum()
}

/// `sup_t Tr|E_t^s − E_t^0|` over the certified grid, with the bound beyond
/// its end; also writes the certified heat traces.
pub fn sweep_tracenorm(study: &Study) -> Result<Section> {
    let cfg = &study.config;
    let tol = &cfg.tolerances;
    let mut sec = Section::new("tracenorm");
    sec.checks.push(point_count(study));
    let (ell, grid) = heat_grid(study)?;
    let t_max = *grid.last().expect("grid has points");

    for spec in study.all() {
        let values = grid.iter().map(|&t| heat_trace(spec, t, study.bounds.nu, cfg.heat.eps)).collect::<Result<Vec<_>>>()?;
        sec.table(format!("heat_{}.csv", label(spec)), heat_table(&values));
    }

    let mut profile = Table::new(&["strategy", "s", "t", "trace_norm"]);
    let mut sups = Table::new(&["strategy", "s", "sup", "t_at_sup", "certificate"]);
    let mut finals = Vec::new();
    for limit in study.limits() {
        let tag = limit.strategy.tag();
        let mut trend_sups = Vec::new();
        for sp in &study.family {
            let values = trace_norm_profile(sp, limit, &grid)?;
            let (arg, grid_sup) = values.iter().enumerate().fold((0, 0.0_f64), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
            // beyond t_max: kernel projectors plus both reduced traces
            let kernel = trace_norm_profile(&sp.truncated(ell), &limit.truncated(ell), &[0.0])?[0];
            let certificate = kernel + reduced_trace(sp, ell, t_max) + reduced_trace(limit, ell, t_max);
            let sup = grid_sup.max(certificate);
            for (t, v) in grid.iter().zip(&values) {
                profile.push(vec![tag.into(), s_value(sp), num(*t), num(*v)]);
            }
            sups.push(vec![tag.into(), s_value(sp), num(sup), num(grid[arg]), num(certificate)]);
            if sp.s.is_some_and(|s| s < 1.0) {
                trend_sups.push(sup);
            }
        }
        sec.checks.push(Check::decreasing(format!("sup_decreasing/{tag}"), &trend_sups, tol.heat_floor));
        let last = trend_sups.last().copied().unwrap_or(f64::NAN);
        sec.checks.push(Check::at_most(format!("final_sup/{tag}"), last, tol.tracenorm));
        finals.push((tag.to_string(), last));
    }
    compare_finals(&mut sec, "final trace-norm sup", &finals, tol.agreement, tol.heat_floor);
    sec.table("tracenorm.csv", profile);
    sec.table("tracenorm_sup.csv", sups);
    Ok(sec)
}

/// `max_x |ζ_s(x) − ζ_0(x)|` over the compact grid, the sum-versus-Mellin
/// cross-check at every point, and the large-time decay bound on the grid.
pub fn sweep_zeta(study: &Study) -> Result<Section> {
    let cfg = &study.config;
    let tol = &cfg.tolerances;
    let mut sec = Section::new("zeta");
    sec.checks.push(point_count(study));
    let (ell, grid) = heat_grid(study)?;
    let points = cfg.zeta.points();
    let nu = study.bounds.nu;

    let mut cross = Table::new(&["spectrum", "re", "im", "sum_re", "sum_im", "mellin_re", "mellin_im", "difference", "mellin_certificate"]);
    let mut worst_cross = 0.0_f64;
    let mut worst_decay = f64::INFINITY;
    let mut sums: Vec<Vec<ZetaSample>> = Vec::new();
    for spec in study.all() {
        let heat = HeatProfile::new(spec, &grid, nu, cfg.heat.eps)?;
        let mut row = Vec::with_capacity(points.len());
        for &(re, im) in &points {
            let x = c(re, im);
            let sum = zeta_sum(spec, x, ell, nu)?;
            let mellin = zeta_mellin(&heat, x, ell, cfg.zeta.eps)?;
            let diff = (sum.value() - mellin.value()).norm();
            worst_cross = worst_cross.max(diff);
            cross.push(vec![
                label(spec),
                num(re),
                num(im),
                num(sum.value.0),
                num(sum.value.1),
                num(mellin.value.0),
                num(mellin.value.1),
                num(diff),
                num(mellin.error),
            ]);
            row.push(sum);
        }
        sec.table(format!("zeta_{}.csv", label(spec)), zeta_table(&row));
        worst_decay = worst_decay.min(check_decay_bound(spec, ell, &grid));
        sums.push(row);
    }
    sec.checks.push(Check::at_most("mellin_crosscheck", worst_cross, tol.mellin));
    sec.checks.push(Check::at_least("expdecay_slack", worst_decay, 0.0));

    let n_family = study.family.len();
    let mut defects = Table::new(&["strategy", "s", "defect"]);
    let mut finals = Vec::new();
    for (li, limit) in study.limits().into_iter().enumerate() {
        let tag = limit.strategy.tag();
        let reference = &sums[n_family + li];
        let mut trend = Vec::new();
        for (sp, row) in study.family.iter().zip(&sums) {
            let d = row.iter().zip(reference).map(|(a, b)| (a.value() - b.value()).norm()).fold(0.0, f64::max);
            defects.push(vec![tag.into(), s_value(sp), num(d)]);
            if sp.s.is_some_and(|s| s < 1.0) {
                trend.push(d);
            }
        }
        sec.checks.push(Check::decreasing(format!("defect_decreasing/{tag}"), &trend, tol.heat_floor));
        let last = trend.last().copied().unwrap_or(f64::NAN);
        sec.checks.push(Check::at_most(format!("final_defect/{tag}"), last, tol.zeta));
        finals.push((tag.to_string(), last));
    }
    compare_finals(&mut sec, "final zeta defect", &finals, tol.agreement, tol.heat_floor);
    sec.table("zeta_crosscheck.csv", cross);
    sec.table("zeta_defects.csv", defects);
    Ok(sec)
}

/// `sup_t ‖k_t^s − k_t^0‖_{L²}` over the certified grid, and the Parseval
/// evaluation against direct quadrature at a small band limit.
pub fn sweep_kernel(study: &Study) -> Result<Section> {
    let cfg = &study.config;
    let tol = &cfg.tolerances;
    let mut sec = Section::new("kernel");
    sec.checks.push(point_count(study));
    let (ell, grid) = heat_grid(study)?;
    let t_max = *grid.last().expect("grid has points");
    let mass_floor = hermitian_eigenvalues(&study.forms.mass())[0];

    let mut sups = Table::new(&["strategy", "s", "sup", "t_at_sup", "certificate"]);
    let mut finals = Vec::new();
    for limit in study.limits() {
        let tag = limit.strategy.tag();
        let mut trend = Vec::new();
        for sp in &study.family {
            let values = kernel_l2_profile(sp, limit, &grid)?;
            let (arg, grid_sup) = values.iter().enumerate().fold((0, 0.0_f64), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
            let kernel = kernel_l2_distance(&sp.truncated(ell), &limit.truncated(ell), 0.0)?;
            let certificate = kernel + 2.0 * (reduced_trace(sp, ell, t_max) + reduced_trace(limit, ell, t_max)) / mass_floor;
            let sup = grid_sup.max(certificate);
            sups.push(vec![tag.into(), s_value(sp), num(sup), num(grid[arg]), num(certificate)]);
            if sp.s.is_some_and(|s| s < 1.0) {
                trend.push(sup);
            }
        }
        sec.checks.push(Check::decreasing(format!("sup_decreasing/{tag}"), &trend, tol.heat_floor));
        finals.push((tag.to_string(), trend.last().copied().unwrap_or(f64::NAN)));
    }
    compare_finals(&mut sec, "final kernel distance", &finals, tol.agreement, tol.heat_floor);
    sec.table("kernel.csv", sups);

    let (parseval, worst) = parseval_against_quadrature(study)?;
    sec.checks.push(Check::at_most("parseval_vs_quadrature", worst, tol.parseval));
    sec.table("kernel_parseval.csv", parseval);
    Ok(sec)
}

fn parseval_against_quadrature(study: &Study) -> Result<(Table, f64)> {
    let cfg = &study.config;
    let forms = DiscreteForms::new(cfg.kernel_band_limit, cfg.family);
    let dim = forms.dim();
    let s = *cfg.s_grid.last().expect("validated grid is nonempty");
    let a = family_spectrum(&forms, s, dim)?;
    let b = if cfg.strategy.constrained() {
        constrained_spectrum(&forms, dim)?
    } else {
        regularized_spectrum(&forms, &cfg.regularization, dim, cfg.depth)?.spectrum
    };
    let n = 4 * (2 * cfg.kernel_band_limit + 1);
    let mut table = Table::new(&["s", "t", "parseval", "quadrature", "difference"]);
    let mut worst = 0.0_f64;
    for t in [cfg.heat.t0, 1.0] {
        let p = kernel_l2_distance(&a, &b, t)?;
        let q = kernel_l2_distance_quadrature(&a, &b, forms.basis(), t, n)?;
        worst = worst.max((p - q).abs());
        table.push(vec![num(s), num(t), num(p), num(q), num((p - q).abs())]);
    }
    Ok((table, worst))
}
