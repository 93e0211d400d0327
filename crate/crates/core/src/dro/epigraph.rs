use ddu_milp::{MilpModel, Sense, VarId, VarSpec};

use super::{EpigraphForm, ScenarioSet};
use crate::error::PlanError;

/// Dual variables of the inner worst-case expectation.
#[derive(Debug, Clone)]
pub struct DualVars {
    /// ν per unit (active and screened-out).
    pub nu: Vec<VarId>,
    pub eps: VarId,
    pub eta: VarId,
}

#[derive(Debug, Clone)]
pub struct EpigraphBlock {
    pub dual: DualVars,
    pub form: EpigraphForm,
    /// Largest Big-M used by the sign-selection rows (0 without them).
    pub big_m: f64,
    /// Upper bound imposed on ε, if any.
    pub eps_bound: Option<f64>,
}

/// Registers ν, ε, η and the rows
///
/// ν_n ≥ θ_j − Σ_i |U_i^n − U_i^j|·ε − η
///
/// for every pair of active units, with the product |ΔU|·ε linearized
/// according to `form`. Screened-out units keep outcome zero and do not
/// exchange mass with other units, so each gets only ν_s ≥ −η.
///
/// `outcomes[u]` is the daily operation cost variable θ of active unit `u`.
/// `eps_bound` (M_ε) bounds ε in the two Big-M forms.
pub fn build_dual_epigraph(
    model: &mut MilpModel,
    scen: &ScenarioSet,
    outcomes: &[Option<VarId>],
    form: EpigraphForm,
    eps_bound: f64,
) -> Result<EpigraphBlock, PlanError> {
    if form == EpigraphForm::Comonotone && !scen.support.is_comonotone() {
        return Err(PlanError::Options(
            "comonotone reduction needs the lexicographic scenario order".into(),
        ));
    }
    let units = scen.units.units();
    let mut nu = Vec::with_capacity(units.len());
    for (u, unit) in units.iter().enumerate() {
        let tag = if unit.active { "eq44nu" } else { "eq50nu" };
        nu.push(model.add_variable(VarSpec::free(format!("nu_u{u}")).tag(tag))?);
    }
    let bounded = form != EpigraphForm::Comonotone;
    let mut eps_spec = VarSpec::continuous("eps").tag("eq44eps");
    if bounded {
        eps_spec = eps_spec.upper(eps_bound);
    }
    let eps = model.add_variable(eps_spec)?;
    let eta = model.add_variable(VarSpec::free("eta").tag("eq44eta"))?;

    let active: Vec<usize> = scen.active();
    let nb = scen.support.num_nodes();
    let gap = |n: usize, j: usize, i: usize| {
        let a = units[n].representative();
        let b = units[j].representative();
        scen.support.daily_total(a, i) - scen.support.daily_total(b, i)
    };
    let mut big_m: f64 = 0.0;

    // z[(p, q)] holds the per-node z variables of active pair (p, q).
    let mut z: std::collections::BTreeMap<(usize, usize), Vec<VarId>> = Default::default();
    for (p, &n) in active.iter().enumerate() {
        for (q, &j) in active.iter().enumerate() {
            let wanted = match form {
                EpigraphForm::Full => true,
                EpigraphForm::Redundancy | EpigraphForm::Comonotone => p < q,
            };
            if !wanted {
                continue;
            }
            let mut zs = Vec::with_capacity(nb);
            for i in 0..nb {
                let a = gap(n, j, i);
                match form {
                    EpigraphForm::Comonotone => {
                        let zv = model.add_variable(
                            VarSpec::continuous(format!("z_{n}_{j}_{i}")).tag("eq47z"),
                        )?;
                        model.add_constraint(
                            [(zv, 1.0), (eps, -a.abs())],
                            Sense::Eq,
                            0.0,
                            "eq47",
                        )?;
                        zs.push(zv);
                    }
                    EpigraphForm::Full | EpigraphForm::Redundancy => {
                        let m = 2.0 * a.abs();
                        big_m = big_m.max(m);
                        let zv = model.add_variable(
                            VarSpec::continuous(format!("z_{n}_{j}_{i}")).tag("eq44z"),
                        )?;
                        let c = model.add_variable(
                            VarSpec::continuous(format!("c_{n}_{j}_{i}")).tag("eq44c"),
                        )?;
                        let alpha = model.add_variable(
                            VarSpec::binary(format!("alpha_{n}_{j}_{i}")).tag("eq44alpha"),
                        )?;
                        // z ≤ aε + Mc
                        model.add_constraint(
                            [(zv, 1.0), (eps, -a), (c, -m)],
                            Sense::Le,
                            0.0,
                            "eq44b",
                        )?;
                        // z ≤ −aε + Mε − Mc
                        model.add_constraint(
                            [(zv, 1.0), (eps, a - m), (c, m)],
                            Sense::Le,
                            0.0,
                            "eq44c",
                        )?;
                        if form == EpigraphForm::Full {
                            model.add_constraint(
                                [(zv, 1.0), (eps, -a)],
                                Sense::Ge,
                                0.0,
                                "eq44d",
                            )?;
                            model.add_constraint([(zv, 1.0), (eps, a)], Sense::Ge, 0.0, "eq44e")?;
                        }
                        // c ≥ (α − 1)M_ε + ε
                        model.add_constraint(
                            [(c, 1.0), (alpha, -eps_bound), (eps, -1.0)],
                            Sense::Ge,
                            -eps_bound,
                            "eq44f",
                        )?;
                        // c ≤ α M_ε
                        model.add_constraint(
                            [(c, 1.0), (alpha, -eps_bound)],
                            Sense::Le,
                            0.0,
                            "eq44h",
                        )?;
                        zs.push(zv);
                    }
                }
            }
            z.insert((p, q), zs);
        }
    }

    for (p, &n) in active.iter().enumerate() {
        for (q, &j) in active.iter().enumerate() {
            let theta = outcomes[j].expect("active unit has an outcome");
            let mut terms = vec![(nu[n], 1.0), (theta, -1.0), (eta, 1.0)];
            let key = if form == EpigraphForm::Full || p <= q {
                (p, q)
            } else {
                (q, p)
            };
            if let Some(zs) = z.get(&key) {
                terms.extend(zs.iter().map(|&v| (v, 1.0)));
            }
            let tag = if p == q { "eq44a" } else { "eq57b" };
            model.add_constraint(terms, Sense::Ge, 0.0, tag)?;
        }
    }
    for (u, unit) in units.iter().enumerate() {
        if !unit.active {
            model.add_constraint([(nu[u], 1.0), (eta, 1.0)], Sense::Ge, 0.0, "eq50a")?;
        }
    }
    Ok(EpigraphBlock {
        dual: DualVars { nu, eps, eta },
        form,
        big_m,
        eps_bound: bounded.then_some(eps_bound),
    })
}
