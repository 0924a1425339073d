//! The verification suite behind `steersd verify`: reruns every structural
//! identity, bound, table row, closed form and plate recipe with its pinned
//! tolerance and reports one pass/fail line per check group.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steersd::channels::block_form_defect;
use steersd::matrix::STRUCTURAL_TOL;
use steersd::protocols::{
    alice_directions, single_qubit_bound, single_qubit_bound_grid_oracle,
    single_qubit_success_per_gate,
};
use steersd::reference::{exact_bound, strategy_optima};
use steersd::steering::lhs_bound;
use steersd::waveplates::verify_recipes;
use steersd::{
    bell_diagonal_bound, bell_diagonal_success, build_bell_diagonal_family, build_family,
    chsh_optimal_settings, chsh_parameter, classify_werner, concurrence, design_conditions_check,
    two_qubit_success, validate_channel, werner_state, BlochVector,
};

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn bounded(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            pass: value <= tol,
            detail: format!("defect {value:.3e} (tolerance {tol:.1e})"),
        }
    }

    fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub fn channel_checks(n: usize) -> Result<Vec<Check>> {
    let fam = build_family(n)?;
    let report = validate_channel(&fam.kraus)?;
    let mut checks = vec![
        Check::bounded(
            format!("channel(n={n}) completeness"),
            report.completeness_defect,
            STRUCTURAL_TOL,
        ),
        Check::bounded(
            format!("channel(n={n}) choi positivity"),
            -report
                .choi_min_eigenvalues
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b)),
            1e-10,
        ),
        Check::flag(
            format!("channel(n={n}) trace non-increase"),
            report.trace_non_increasing(),
            format!("effect eigenvalues {:?}", report.effect_max_eigenvalues),
        ),
        Check::bounded(
            format!("dilation(n={n}) unitarity"),
            fam.u.unitarity_defect(),
            STRUCTURAL_TOL,
        ),
        Check::bounded(
            format!("dilation(n={n}) block form"),
            block_form_defect(&fam.u, &fam.a0, &fam.a1),
            STRUCTURAL_TOL,
        ),
    ];
    if n == 2 {
        let pi8 = std::f64::consts::PI / 8.0;
        let c = 1.0 / (4.0 * pi8.sin());
        let s = pi8.sin() / std::f64::consts::SQRT_2;
        let a0 = steersd::ComplexMatrix::from_real_rows(&[vec![c, s], vec![c, -s]]);
        checks.push(Check::bounded(
            "dilation(n=2) closed-form block".to_string(),
            fam.a0.max_abs_diff(&a0),
            STRUCTURAL_TOL,
        ));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        checks.push(Check::flag(
            "design conditions(n=2)".to_string(),
            design_conditions_check(&fam, &BlochVector::new(h, 0.0, h), &BlochVector::new(-h, 0.0, h)),
            "A_j-conjugated projectors proportional to the stated directions",
        ));
    }
    Ok(checks)
}

pub fn bell_diagonal_checks() -> Result<Vec<Check>> {
    let fam = build_bell_diagonal_family();
    let report = validate_channel(&fam.kraus)?;
    let mut checks = vec![
        Check::bounded(
            "bell-diagonal completeness",
            report.completeness_defect,
            STRUCTURAL_TOL,
        ),
        Check::flag(
            "bell-diagonal channel validity",
            report.is_valid(),
            "trace non-increase and Choi positivity",
        ),
    ];

    let bound = bell_diagonal_bound().success_probability;
    checks.push(Check::bounded(
        "bell-diagonal single-qubit bound",
        (bound - (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0).abs(),
        1e-9,
    ));

    // full protocol trace against the closed form on in-triangle samples
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut drawn = 0;
    while drawn < 50 {
        let tx: f64 = rng.gen_range(-1.0..1.0);
        let tz: f64 = rng.gen_range(-1.0..1.0);
        if tz < -1.0 || tz > 1.0 - 2.0 * tx.abs() {
            continue;
        }
        drawn += 1;
        let p = bell_diagonal_success(tx, tz)?.success_probability;
        worst = worst.max((p - (2.0 + tx - tz) / 4.0).abs());
    }
    checks.push(Check::bounded(
        "bell-diagonal closed form (50 samples)",
        worst,
        1e-10,
    ));

    let s2 = std::f64::consts::SQRT_2;
    let above = bell_diagonal_success(0.5 * (s2 + 1e-6), -0.5 * (s2 + 1e-6))?.success_probability;
    let below = bell_diagonal_success(0.5 * (s2 - 1e-6), -0.5 * (s2 - 1e-6))?.success_probability;
    checks.push(Check::flag(
        "bell-diagonal steering threshold",
        above > bound && below <= bound,
        format!("P(+1e-6) - bound = {:.3e}, P(-1e-6) - bound = {:.3e}", above - bound, below - bound),
    ));
    Ok(checks)
}

pub fn bound_checks(n: usize, oracle_grid: usize) -> Result<Vec<Check>> {
    let fam = build_family(n)?;
    let bound = single_qubit_bound(&fam);
    let exact = exact_bound(n)?;
    let oracle = single_qubit_bound_grid_oracle(&fam, oracle_grid);
    let eta_star = lhs_bound(n)?;
    Ok(vec![
        Check::bounded(
            format!("bound(n={n}) closed form"),
            (bound.success_probability - exact).abs(),
            1e-9,
        ),
        Check::flag(
            format!("bound(n={n}) grid oracle"),
            oracle <= bound.success_probability + 1e-12
                && bound.success_probability - oracle < 1e-3,
            format!("gap {:.3e}", bound.success_probability - oracle),
        ),
        Check::bounded(
            format!("bound(n={n}) threshold identity"),
            (2.0 * bound.success_probability - 1.0 - eta_star).abs(),
            1e-9,
        ),
    ])
}

pub fn table_checks(n: usize) -> Result<Vec<Check>> {
    let fam = build_family(n)?;
    let mut worst = 0.0f64;
    let rows = strategy_optima(n)?;
    for opt in &rows {
        let per_gate = single_qubit_success_per_gate(
            &fam,
            &opt.strategy,
            &opt.probe.density().map_err(anyhow::Error::from)?,
        )?;
        for (got, want) in per_gate.iter().zip(&opt.per_gate) {
            worst = worst.max((got - want).abs());
        }
    }
    Ok(vec![Check::bounded(
        format!("strategy table(n={n}, {} rows)", rows.len()),
        worst,
        1e-9,
    )])
}

pub fn linearity_checks(n: usize) -> Result<Vec<Check>> {
    let fam = build_family(n)?;
    let table = alice_directions(n)?;
    let mut worst = 0.0f64;
    for k in 0..=10 {
        let eta = k as f64 / 10.0;
        let p = two_qubit_success(&werner_state(eta)?, &fam, &table)?.success_probability;
        worst = worst.max((p - (0.5 + eta / 2.0)).abs());
    }
    Ok(vec![Check::bounded(
        format!("werner linearity(n={n})"),
        worst,
        1e-9,
    )])
}

pub fn waveplate_checks(n: usize) -> Result<Vec<Check>> {
    let checks = verify_recipes(n)?;
    if checks.is_empty() {
        return Ok(vec![Check::flag(
            format!("waveplates(n={n})"),
            true,
            "no plate recipes (identity gate only)",
        )]);
    }
    Ok(checks
        .into_iter()
        .map(|c| {
            Check::flag(
                format!("waveplates(n={n}) gate g{}", c.gate),
                c.passes(),
                format!("distance {:.3e} (tolerance {:.1e})", c.distance, c.tolerance),
            )
        })
        .collect())
}

pub fn chsh_checks() -> Result<Vec<Check>> {
    let settings = chsh_optimal_settings();
    let s_max = chsh_parameter(&werner_state(1.0)?, &settings)?;
    let s_boundary = chsh_parameter(&werner_state(std::f64::consts::FRAC_1_SQRT_2)?, &settings)?;
    let fam = build_family(10)?;
    let table = alice_directions(10)?;
    let mut worst = 0.0f64;
    for k in 0..=10 {
        let eta = k as f64 / 10.0;
        let rho = werner_state(eta)?;
        let p = two_qubit_success(&rho, &fam, &table)?.success_probability;
        let s = chsh_parameter(&rho, &settings)?;
        worst = worst.max((s - 2.0 * std::f64::consts::SQRT_2 * (2.0 * p - 1.0)).abs());
    }
    Ok(vec![
        Check::bounded(
            "chsh maximal violation",
            (s_max - 2.0 * std::f64::consts::SQRT_2).abs(),
            1e-9,
        ),
        Check::bounded("chsh classical boundary", (s_boundary - 2.0).abs(), 1e-9),
        Check::bounded("chsh-success relation", worst, 1e-9),
    ])
}

pub fn classification_checks() -> Result<Vec<Check>> {
    let pink = classify_werner(0.45, 10)?;
    let dark_red = classify_werner(0.6, 10)?;
    let violating = classify_werner(0.75, 10)?;
    let c = concurrence(&werner_state(0.436)?)?;
    Ok(vec![
        Check::flag(
            "classification eta=0.45 n=10",
            pink.entangled && !pink.steerable_at_n && pink.known_bell_local,
            "entangled, unsteerable, Bell-local",
        ),
        Check::flag(
            "classification eta=0.6 n=10",
            dark_red.steerable_at_n && dark_red.known_bell_local,
            "steerable yet Bell-local",
        ),
        Check::flag(
            "classification eta=0.75",
            violating.chsh_violating,
            "CHSH-violating",
        ),
        Check::bounded("concurrence at eta=0.436", (c - 0.154).abs(), 2e-3),
    ])
}

/// Which verification groups to run.
pub struct Selection {
    pub settings: Option<usize>,
    pub waveplates_only: Option<usize>,
}

pub fn run_selection(selection: &Selection) -> Result<Vec<Check>> {
    if let Some(n) = selection.waveplates_only {
        return waveplate_checks(n);
    }
    let counts: Vec<usize> = match selection.settings {
        Some(n) => vec![n],
        None => steersd::SUPPORTED_SETTINGS.to_vec(),
    };
    let mut checks = Vec::new();
    for &n in &counts {
        checks.extend(channel_checks(n)?);
        checks.extend(bound_checks(n, 10_000)?);
        checks.extend(table_checks(n)?);
        checks.extend(linearity_checks(n)?);
        checks.extend(waveplate_checks(n)?);
    }
    if selection.settings.is_none() {
        checks.extend(bell_diagonal_checks()?);
        checks.extend(chsh_checks()?);
        checks.extend(classification_checks()?);
    }
    Ok(checks)
}
