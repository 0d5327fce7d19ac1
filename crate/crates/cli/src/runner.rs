//! Scenario execution.

use std::time::Instant;

use hodge_core::complexes::{
    betti_smith, cup_product_operator, fixture, magnet_operator, parse_complex_text,
    relative_complex, twisted_coboundary, BoundaryMarking, CochainComplex, CubicalGrid,
    LocalSystem, SimplicialComplex,
};
use hodge_core::hodge::{
    build_dirac, decomposition_orthogonality_defect, graded_kernel_dims, hodge_decompose,
    kernel_isomorphism, power_kernel_check, restricted_kernel_isomorphism, IsomorphismMode,
};
use hodge_core::linops::{Metric, NilpotentOperator, TolPolicy};
use hodge_core::roughmetrics::{
    induce_weights, parse_metric_field, sample_metric_field, sample_weight_spec, SamplerConfig,
    WeightSpec,
};
use hodge_core::scalar::cr;

use crate::refine;
use crate::report::{Report, TaskResult};
use crate::scenario::{
    ComplexSpec, MetricModel, MetricSpec, RefineModel, Scenario, Task, Tolerances,
};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Build(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub struct BuiltComplex {
    pub complex: CochainComplex,
    pub gamma: NilpotentOperator,
    pub grid: Option<CubicalGrid>,
    pub smith: Option<Vec<usize>>,
}

fn simplicial_from_spec(spec: &ComplexSpec) -> Result<SimplicialComplex, RunError> {
    if let Some(name) = &spec.fixture {
        return fixture(name).map_err(|e| RunError::Build(e.to_string()));
    }
    if let Some(path) = &spec.file {
        let text = std::fs::read_to_string(path)?;
        return parse_complex_text(&text).map_err(|e| RunError::Build(e.to_string()));
    }
    Err(RunError::Build("complex spec names no source".into()))
}

/// `cubical_<a>x<b>[_periodic]` as a fixture-style name.
fn parse_cubical_name(name: &str) -> Option<CubicalGrid> {
    let rest = name.strip_prefix("cubical_")?;
    let (dims, periodic) = match rest.strip_suffix("_periodic") {
        Some(dims) => (dims, true),
        None => (rest, false),
    };
    let sizes: Vec<usize> = dims
        .split('x')
        .map(|t| t.parse().ok())
        .collect::<Option<_>>()?;
    if sizes.is_empty() {
        return None;
    }
    let flags = vec![periodic; sizes.len()];
    CubicalGrid::new(sizes, flags).ok()
}

pub fn build_complex(spec: &ComplexSpec) -> Result<BuiltComplex, RunError> {
    let named_grid = spec
        .fixture
        .as_deref()
        .and_then(parse_cubical_name)
        .map(|grid| (grid.to_cochain_complex(), grid));
    if let Some((complex, grid)) = named_grid {
        let gamma = complex
            .total_gamma()
            .map_err(|e| RunError::Build(e.to_string()))?;
        let smith = Some(
            betti_smith(&complex)
                .map_err(|e| RunError::Build(e.to_string()))?
                .betti,
        );
        return Ok(BuiltComplex {
            complex,
            gamma,
            grid: Some(grid),
            smith,
        });
    }
    let (complex, grid) = if let Some(cubical) = &spec.cubical {
        if spec.boundary.is_some() || spec.local_system.is_some() || spec.magnet.is_some() {
            return Err(RunError::Build(
                "boundary/local_system/magnet require a simplicial complex".into(),
            ));
        }
        let mut grid = CubicalGrid::new(cubical.sizes.clone(), cubical.periodic.clone())
            .map_err(|e| RunError::Build(e.to_string()))?;
        if let Some(spacing) = &cubical.spacing {
            grid = grid.with_spacing(spacing.clone());
        }
        (grid.to_cochain_complex(), Some(grid))
    } else {
        let sc = simplicial_from_spec(spec)?;
        let complex = if let Some(boundary) = &spec.boundary {
            let marking = match (&boundary.named, &boundary.simplices) {
                (Some(name), None) if name == "octahedron_surface" => {
                    BoundaryMarking::from_subcomplex(&hodge_core::complexes::octahedron())
                }
                (Some(name), None) => {
                    let sub = fixture(name).map_err(|e| RunError::Build(e.to_string()))?;
                    BoundaryMarking::from_subcomplex(&sub)
                }
                (None, Some(cells)) => {
                    let sub = SimplicialComplex::from_top_cells(cells)
                        .map_err(|e| RunError::Build(e.to_string()))?;
                    BoundaryMarking::from_subcomplex(&sub)
                }
                _ => {
                    return Err(RunError::Build(
                        "boundary must give exactly one of named, simplices".into(),
                    ))
                }
            };
            relative_complex(&sc, &marking).map_err(|e| RunError::Build(e.to_string()))?
        } else if let Some(system) = &spec.local_system {
            let values: Vec<_> = system
                .scalars
                .iter()
                .map(|[re, im]| hodge_core::scalar::c(*re, *im))
                .collect();
            if values.len() != sc.simplices(1).len() {
                return Err(RunError::Build(format!(
                    "local system lists {} transports for {} edges",
                    values.len(),
                    sc.simplices(1).len()
                )));
            }
            let system =
                LocalSystem::scalar(&sc, &values).map_err(|e| RunError::Build(e.to_string()))?;
            twisted_coboundary(&sc, &system).map_err(|e| RunError::Build(e.to_string()))?
        } else {
            CochainComplex::from_simplicial(&sc)
        };
        (complex, None)
    };

    let mut gamma = complex
        .total_gamma()
        .map_err(|e| RunError::Build(e.to_string()))?;

    if let Some(magnet) = &spec.magnet {
        if spec.boundary.is_some() || spec.local_system.is_some() {
            return Err(RunError::Build(
                "magnet cannot combine with boundary or local_system".into(),
            ));
        }
        let sc = simplicial_from_spec(spec)?;
        if magnet.cup_potential.len() != sc.vertex_count() {
            return Err(RunError::Build(
                "cup_potential needs one value per vertex".into(),
            ));
        }
        let alpha: Vec<_> = sc
            .simplices(1)
            .iter()
            .map(|e| cr(magnet.cup_potential[e[1]] - magnet.cup_potential[e[0]]))
            .collect();
        let w = cup_product_operator(&sc, &alpha);
        gamma = magnet_operator(&gamma, &w, complex.grading())
            .map_err(|e| RunError::Build(format!("magnet rejected: {e}")))?;
    }

    // The integer oracle speaks about the complex's own coboundaries; a
    // magnet perturbation changes the operator, so no oracle applies.
    let smith = if complex.is_integer() && spec.magnet.is_none() {
        Some(
            betti_smith(&complex)
                .map_err(|e| RunError::Build(e.to_string()))?
                .betti,
        )
    } else {
        None
    };

    Ok(BuiltComplex {
        complex,
        gamma,
        grid,
        smith,
    })
}

pub fn build_metric(
    spec: &MetricSpec,
    built: &BuiltComplex,
    seed_override: Option<u64>,
) -> Result<Metric, RunError> {
    let seed = seed_override.unwrap_or(spec.seed);
    let weights: WeightSpec = match spec.model {
        MetricModel::Identity => WeightSpec::identity(built.complex.dims()),
        MetricModel::Random => match &built.grid {
            Some(grid) => {
                let field =
                    sample_metric_field(grid, &SamplerConfig::log_gaussian(seed, spec.c_max));
                induce_weights(&field, grid).map_err(|e| RunError::Build(e.to_string()))?
            }
            None => sample_weight_spec(
                built.complex.dims(),
                &SamplerConfig::log_gaussian(seed, spec.c_max),
            ),
        },
        MetricModel::Weierstrass => {
            let grid = built
                .grid
                .as_ref()
                .ok_or_else(|| RunError::Build("weierstrass metric needs a cubical complex".into()))?;
            let field = hodge_core::roughmetrics::weierstrass_metric(grid, spec.terms);
            induce_weights(&field, grid).map_err(|e| RunError::Build(e.to_string()))?
        }
        MetricModel::Explicit => {
            let grid = built
                .grid
                .as_ref()
                .ok_or_else(|| RunError::Build("explicit metric needs a cubical complex".into()))?;
            let path = spec
                .file
                .as_ref()
                .ok_or_else(|| RunError::Build("explicit metric needs a file".into()))?;
            let field = parse_metric_field(&std::fs::read_to_string(path)?)
                .map_err(|e| RunError::Build(e.to_string()))?;
            induce_weights(&field, grid).map_err(|e| RunError::Build(e.to_string()))?
        }
    };
    Ok(weights.total_form())
}

fn policy_of(tol: &Tolerances) -> TolPolicy {
    TolPolicy {
        rank_tol: None,
        gap_requirement: tol.rank_gap,
    }
}

pub struct RunOptions {
    pub no_timings: bool,
    pub seed_override: Option<u64>,
}

/// Execute every task of a scenario; a report is produced even when tasks
/// fail.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Report {
    let start = Instant::now();
    let mut tasks: Vec<TaskResult> = Vec::new();
    let mut passed = true;

    let refine_only = scenario.tasks == [Task::RefineDivergence]
        && scenario.complex.fixture.is_none()
        && scenario.complex.file.is_none()
        && scenario.complex.cubical.is_none();
    if refine_only {
        let t0 = Instant::now();
        let mut results = run_task(
            Task::RefineDivergence,
            scenario,
            // the refine task carries its own grid; the placeholder complex
            // is never touched
            &BuiltComplex {
                complex: CochainComplex::from_integer(
                    vec![1],
                    Vec::new(),
                ),
                gamma: NilpotentOperator::zero(1),
                grid: None,
                smith: None,
            },
            &[],
            &scenario.tolerances,
        );
        for r in &mut results {
            if !options.no_timings {
                r.timing_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
            }
            passed &= r.passed;
        }
        tasks.append(&mut results);
        return Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.clone(),
            tasks,
            passed,
            total_ms: if options.no_timings {
                None
            } else {
                Some(start.elapsed().as_secs_f64() * 1e3)
            },
        };
    }

    match build_complex(&scenario.complex) {
        Err(err) => {
            let mut t = TaskResult::new("build");
            t.passed = false;
            t.note = Some(err.to_string());
            tasks.push(t);
            passed = false;
        }
        Ok(built) => {
            let mut metrics: Vec<Metric> = Vec::new();
            let mut metric_failed = false;
            for (i, spec) in scenario.metrics.iter().enumerate() {
                match build_metric(spec, &built, options.seed_override) {
                    Ok(m) => metrics.push(m),
                    Err(err) => {
                        let mut t = TaskResult::new("build_metric");
                        t.metric = Some(i);
                        t.passed = false;
                        t.note = Some(err.to_string());
                        tasks.push(t);
                        passed = false;
                        metric_failed = true;
                    }
                }
            }
            if !metric_failed {
                for task in &scenario.tasks {
                    let t0 = Instant::now();
                    let mut results =
                        run_task(*task, scenario, &built, &metrics, &scenario.tolerances);
                    for r in &mut results {
                        if !options.no_timings {
                            r.timing_ms = Some(t0.elapsed().as_secs_f64() * 1e3);
                        }
                        passed &= r.passed;
                    }
                    tasks.append(&mut results);
                }
            }
        }
    }

    Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.clone(),
        tasks,
        passed,
        total_ms: if options.no_timings {
            None
        } else {
            Some(start.elapsed().as_secs_f64() * 1e3)
        },
    }
}

fn run_task(
    task: Task,
    scenario: &Scenario,
    built: &BuiltComplex,
    metrics: &[Metric],
    tol: &Tolerances,
) -> Vec<TaskResult> {
    let policy = policy_of(tol);
    match task {
        Task::Betti => metrics
            .iter()
            .enumerate()
            .map(|(i, metric)| {
                let mut t = TaskResult::new(task.name());
                t.metric = Some(i);
                match build_dirac(&built.gamma, metric)
                    .and_then(|op| graded_kernel_dims(&op, built.complex.grading(), &policy))
                {
                    Ok(dims) => {
                        if let Some(oracle) = &built.smith {
                            t.oracle = Some(oracle.clone());
                            t.oracle_match = Some(&dims == oracle);
                            t.passed = &dims == oracle;
                        }
                        t.dims = Some(dims);
                    }
                    Err(err) => {
                        t.passed = false;
                        t.note = Some(err.to_string());
                    }
                }
                t
            })
            .collect(),
        Task::Decompose => metrics
            .iter()
            .enumerate()
            .map(|(i, metric)| {
                let mut t = TaskResult::new(task.name());
                t.metric = Some(i);
                match build_dirac(&built.gamma, metric)
                    .and_then(|op| hodge_decompose(&op, &policy).map(|d| (op, d)))
                {
                    Ok((op, dec)) => {
                        let (k, rg, rs) = dec.dims();
                        t.dims = Some(vec![k, rg, rs]);
                        let ortho = decomposition_orthogonality_defect(&dec);
                        let sa = op.self_adjoint_defect();
                        t.metrics_out.push(("orthogonality_defect".into(), ortho));
                        t.metrics_out.push(("self_adjoint_defect".into(), sa));
                        t.metrics_out
                            .push(("adjoint_residual".into(), op.adjoint_residual()));
                        t.metrics_out.push((
                            "rank_ambiguous".into(),
                            if dec.rank_ambiguous() { 1.0 } else { 0.0 },
                        ));
                        t.spectrum = Some(dec.pencil_eigenvalues.clone());
                        let exact = k + rg + rs == built.complex.total_dim() && rg == rs;
                        let clean = ortho <= tol.residual && sa <= 1e-12;
                        t.passed = exact && clean;
                        if let Some(oracle) = &built.smith {
                            let total: usize = oracle.iter().sum();
                            t.oracle = Some(vec![total]);
                            t.oracle_match = Some(k == total);
                            t.passed &= k == total;
                        }
                    }
                    Err(err) => {
                        t.passed = false;
                        t.note = Some(err.to_string());
                    }
                }
                t
            })
            .collect(),
        Task::Isomorphism => {
            let mut out = Vec::new();
            for mode in [IsomorphismMode::AlongRanPi, IsomorphismMode::AlongRanGamma] {
                let mut t = TaskResult::new(task.name());
                t.note = Some(format!("{mode:?}"));
                match kernel_isomorphism(&built.gamma, &metrics[0], &metrics[1], mode, &policy) {
                    Ok(iso) => {
                        t.dims = Some(vec![iso.dim()]);
                        t.metrics_out.push(("condition".into(), iso.condition));
                        t.metrics_out
                            .push(("residual_fi".into(), iso.residual_fi));
                        t.metrics_out
                            .push(("residual_if".into(), iso.residual_if));
                        t.metrics_out
                            .push(("mutual_bound".into(), iso.mutual_bound_constant));
                        t.passed = iso.invertible(tol.isomorphism);
                        if let Some(oracle) = &built.smith {
                            let total: usize = oracle.iter().sum();
                            t.oracle = Some(vec![total]);
                            t.oracle_match = Some(iso.dim() == total);
                            t.passed &= iso.dim() == total;
                        }
                    }
                    Err(err) => {
                        t.passed = false;
                        t.note = Some(format!("{mode:?}: {err}"));
                    }
                }
                out.push(t);
            }
            out
        }
        Task::GradedIsomorphism => {
            let mut t = TaskResult::new(task.name());
            match restricted_kernel_isomorphism(
                &built.gamma,
                &metrics[0],
                &metrics[1],
                built.complex.grading(),
                2,
                &policy,
            ) {
                Ok(isos) => {
                    let dims: Vec<usize> = isos.iter().map(|i| i.dim()).collect();
                    for (j, iso) in isos.iter().enumerate() {
                        t.metrics_out
                            .push((format!("condition_{j}"), iso.condition));
                        t.metrics_out
                            .push((format!("residual_fi_{j}"), iso.residual_fi));
                    }
                    t.passed = isos.iter().all(|i| i.invertible(tol.isomorphism));
                    if let Some(oracle) = &built.smith {
                        t.oracle = Some(oracle.clone());
                        t.oracle_match = Some(&dims == oracle);
                        t.passed &= &dims == oracle;
                    }
                    t.dims = Some(dims);
                }
                Err(err) => {
                    t.passed = false;
                    t.note = Some(err.to_string());
                }
            }
            vec![t]
        }
        Task::PowerCheck => metrics
            .iter()
            .enumerate()
            .map(|(i, metric)| {
                let mut t = TaskResult::new(task.name());
                t.metric = Some(i);
                match build_dirac(&built.gamma, metric) {
                    Ok(op) => {
                        let mut all = true;
                        let mut dims = Vec::new();
                        for k in [2usize, 3] {
                            let report = power_kernel_check(&op, k, &policy);
                            all &= report.passed();
                            dims.push(report.dim_kernel_power);
                            t.metrics_out.push((
                                format!("rank_power_{k}"),
                                report.rank_power as f64,
                            ));
                        }
                        t.dims = Some(dims);
                        t.passed = all;
                    }
                    Err(err) => {
                        t.passed = false;
                        t.note = Some(err.to_string());
                    }
                }
                t
            })
            .collect(),
        Task::RefineDivergence => {
            let mut t = TaskResult::new(task.name());
            let spec = scenario.refine.expect("validated");
            let rows = refine::refine_study(spec.model, spec.base, spec.levels, 24);
            t.passed = match spec.model {
                RefineModel::Weierstrass => refine::strictly_increasing(&rows),
                RefineModel::Smooth => refine::stabilized(&rows, 0.05),
            };
            let overall = rows
                .iter()
                .skip(1)
                .map(|r| r.slope)
                .sum::<f64>()
                / (rows.len().saturating_sub(1).max(1) as f64);
            t.metrics_out.push(("log2_slope".into(), overall));
            t.refine_rows = Some(rows);
            t
                .metrics_out
                .push(("levels".into(), spec.levels as f64));
            vec![t]
        }
    }
}
