//! Coordination control: conditional independence, conditional
//! decomposability (with greedy alphabet extension), coordinator
//! construction, conditional controllability and closedness, the
//! supervisor-synthesis equations with their refinement pass, and the full
//! solve pipeline.

use serde::Serialize;

use crate::compare::{language_equality, language_inclusion, EqualityVerdict, InclusionVerdict, Mode};
use crate::error::{Error, Result};
use crate::event::EventSet;
use crate::generator::Generator;
use crate::limits::Limits;
use crate::observer::union_target;
use crate::ops::{project_onto, sync_product, sync_product_all};
use crate::supervisory::{is_controllable, is_lm_closed, sup_c_product, ControllabilityVerdict, LmClosedVerdict};
use crate::words::Word;

/// Inputs of the coordination control problem: plants, a specification
/// over the union alphabet, a coordinator event set, and solver options.
#[derive(Debug, Clone)]
pub struct CoordinationProblem {
    pub plants: Vec<Generator>,
    pub spec: Generator,
    pub sigma_k: EventSet,
    pub options: SolveOptions,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Maximum number of refinement passes; non-convergence within the
    /// limit is a reported outcome, never an error.
    pub refine_limit: usize,
    /// Require conditional decomposability of the prefix closure too (the
    /// problem statement asks for both).
    pub require_closure_cd: bool,
    /// Explicit uncontrollable events; the controllability flags on the
    /// alphabets are the default.
    pub uncontrollable: Option<EventSet>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            refine_limit: 16,
            require_closure_cd: true,
            uncontrollable: None,
        }
    }
}

impl CoordinationProblem {
    pub fn new(plants: Vec<Generator>, spec: Generator, sigma_k: EventSet) -> Result<Self> {
        let problem = CoordinationProblem {
            plants,
            spec,
            sigma_k,
            options: SolveOptions::default(),
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Checks the structural invariants: at least two plants, consistent
    /// controllability flags, Σs ⊆ Σk ⊆ ∪Σi, and a specification alphabet
    /// equal to ∪Σi.
    pub fn validate(&self) -> Result<()> {
        if self.plants.len() < 2 {
            return Err(Error::InvalidProblem(
                "a coordination problem needs at least two plants".into(),
            ));
        }
        let mut union = self.plants[0].alphabet().clone();
        for g in &self.plants[1..] {
            union = union.union(g.alphabet())?;
        }
        // Flag consistency between plants and spec.
        union = union.union(self.spec.alphabet())?;
        if !self.spec.alphabet().same_names(&union) {
            return Err(Error::InvalidProblem(format!(
                "specification alphabet {} must equal the union of the plant alphabets {}",
                self.spec.alphabet(),
                union
            )));
        }
        if !self.sigma_k.is_subset_of(&union) {
            return Err(Error::InvalidProblem(format!(
                "coordinator events {} must lie inside the union alphabet {}",
                self.sigma_k, union
            )));
        }
        let shared = shared_events(&self.alphabets());
        if !shared.is_subset_of(&self.sigma_k) {
            return Err(Error::InvalidProblem(format!(
                "coordinator events {} must contain every shared event {}",
                self.sigma_k, shared
            )));
        }
        if let Some(u) = &self.options.uncontrollable {
            if !u.is_subset_of(&union) {
                return Err(Error::InvalidProblem(format!(
                    "uncontrollable events {} must lie inside the union alphabet {}",
                    u, union
                )));
            }
        }
        Ok(())
    }

    pub fn alphabets(&self) -> Vec<EventSet> {
        self.plants.iter().map(|g| g.alphabet().clone()).collect()
    }

    /// Full alphabet in the specification's order.
    pub fn full_alphabet(&self) -> EventSet {
        self.spec.alphabet().clone()
    }

    pub fn uncontrollable(&self) -> EventSet {
        match &self.options.uncontrollable {
            Some(u) => u.clone(),
            None => self.full_alphabet().uncontrollable_subset(),
        }
    }
}

/// Σs = ∪_{i≠j}(Σi ∩ Σj), ordered by first appearance.
pub fn shared_events(alphabets: &[EventSet]) -> EventSet {
    let mut out = EventSet::new();
    for (i, a) in alphabets.iter().enumerate() {
        for (j, b) in alphabets.iter().enumerate() {
            if i == j {
                continue;
            }
            for e in a.intersect(b).iter() {
                if !out.contains(&e.name) {
                    out.insert(e.clone()).expect("guarded by contains");
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceVerdict {
    pub holds: bool,
    /// Shared events reachable in two plants but not in the coordinator.
    pub offending: Vec<String>,
}

/// Conditional independence: every event reachable in two different plants
/// must be reachable in the coordinator.
pub fn conditionally_independent(plants: &[&Generator], coordinator: &Generator) -> IndependenceVerdict {
    let reachable: Vec<EventSet> = plants.iter().map(|g| g.reachable_events()).collect();
    let coord = coordinator.reachable_events();
    let shared = shared_events(&reachable);
    let offending: Vec<String> = shared
        .iter()
        .filter(|e| !coord.contains(&e.name))
        .map(|e| e.name.clone())
        .collect();
    IndependenceVerdict {
        holds: offending.is_empty(),
        offending,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CdVerdict {
    pub holds: bool,
    /// Shortest word in the composed projections that is not in the
    /// language; present iff `holds` is false.
    pub counterexample: Option<Word>,
}

fn check_cd_preconditions(k: &Generator, alphabets: &[EventSet], sigma_k: &EventSet) -> Result<EventSet> {
    let mut union = match alphabets.first() {
        Some(a) => a.clone(),
        None => {
            return Err(Error::InvalidProblem(
                "conditional decomposability needs at least two alphabets".into(),
            ))
        }
    };
    for a in &alphabets[1..] {
        union = union.union(a)?;
    }
    if alphabets.len() < 2 {
        return Err(Error::InvalidProblem(
            "conditional decomposability needs at least two alphabets".into(),
        ));
    }
    if !k.alphabet().same_names(&union) {
        return Err(Error::InvalidProblem(format!(
            "language alphabet {} must equal the union of the component alphabets {}",
            k.alphabet(),
            union
        )));
    }
    if !sigma_k.is_subset_of(&union) {
        return Err(Error::InvalidProblem(format!(
            "coordinator events {} must lie inside the union alphabet {}",
            sigma_k, union
        )));
    }
    let shared = shared_events(alphabets);
    if !shared.is_subset_of(sigma_k) {
        return Err(Error::InvalidProblem(format!(
            "coordinator events {} must contain every shared event {}",
            sigma_k, shared
        )));
    }
    Ok(union)
}

/// ∥ over the projections of `base` onto each Σi ∪ Σk.
fn compose_projections(
    base: &Generator,
    alphabets: &[EventSet],
    sigma_k: &EventSet,
    limits: &Limits,
) -> Result<Generator> {
    let full = base.alphabet();
    let mut parts = Vec::with_capacity(alphabets.len());
    for a in alphabets {
        let target = union_target(full, a, sigma_k);
        parts.push(project_onto(
            base,
            target.names().iter().map(|s| s.as_str()),
            limits,
        )?);
    }
    let refs: Vec<&Generator> = parts.iter().collect();
    sync_product_all(&refs)
}

/// Is the language conditionally decomposable, i.e. equal to the
/// synchronous composition of its projections onto the Σi ∪ Σk? The
/// containment of the language in the composition always holds; the
/// counterexample, when present, witnesses the converse failing.
pub fn is_conditionally_decomposable(
    k: &Generator,
    alphabets: &[EventSet],
    sigma_k: &EventSet,
    mode: Mode,
    limits: &Limits,
) -> Result<CdVerdict> {
    check_cd_preconditions(k, alphabets, sigma_k)?;
    let base = match mode {
        Mode::Marked => k.clone(),
        Mode::Closed => k.prefix_closure(),
    };
    let composition = compose_projections(&base, alphabets, sigma_k, limits)?;
    // The automatic direction, tested anyway: a failure here would be an
    // implementation bug, not a property of the input.
    let automatic = language_inclusion(&base, &composition, Mode::Marked);
    assert!(
        automatic.holds,
        "language escaped the composition of its own projections"
    );
    let verdict = language_inclusion(&composition, &base, Mode::Marked);
    Ok(CdVerdict {
        holds: verdict.holds,
        counterexample: verdict.counterexample,
    })
}

/// Grows Σk until the language (and, when requested, its prefix closure)
/// is conditionally decomposable.
///
/// Greedy step: take the shortest counterexample of the failing check and
/// add, among its events missing from Σk (insertion order), the first one
/// whose addition removes the counterexample from the recomputed
/// composition. Σk = ∪Σi always succeeds, so the loop terminates.
pub fn extend_for_cd(
    k: &Generator,
    alphabets: &[EventSet],
    sigma_k: &EventSet,
    require_closure: bool,
    limits: &Limits,
) -> Result<EventSet> {
    let union = check_cd_preconditions(k, alphabets, sigma_k)?;
    let mut sk = union.intersect(sigma_k);
    let closure = k.prefix_closure();
    loop {
        limits.check_cancelled()?;
        let marked_v = is_conditionally_decomposable(k, alphabets, &sk, Mode::Marked, limits)?;
        let failing = if !marked_v.holds {
            Some((marked_v, k))
        } else if require_closure {
            let closed_v =
                is_conditionally_decomposable(k, alphabets, &sk, Mode::Closed, limits)?;
            if closed_v.holds {
                None
            } else {
                Some((closed_v, &closure))
            }
        } else {
            None
        };
        let Some((verdict, base)) = failing else {
            return Ok(sk);
        };
        if sk.same_names(&union) {
            // With the full alphabet the projections are identities and CD
            // cannot fail; reaching this point means a bug upstream.
            unreachable!("conditional decomposability failed for the full alphabet");
        }
        let cex = verdict
            .counterexample
            .expect("failing CD check carries a counterexample");
        let mut candidates: Vec<String> = union
            .iter()
            .filter(|e| !sk.contains(&e.name) && cex.0.iter().any(|n| n == &e.name))
            .map(|e| e.name.clone())
            .collect();
        if candidates.is_empty() {
            // The counterexample uses only coordinator events; any missing
            // event keeps the search moving.
            candidates = union
                .iter()
                .filter(|e| !sk.contains(&e.name))
                .map(|e| e.name.clone())
                .take(1)
                .collect();
        }
        let mut chosen = None;
        for cand in &candidates {
            let mut trial = sk.clone();
            trial.insert(union.by_name(cand).expect("candidate from union").clone())?;
            let trial_composition = compose_projections(base, alphabets, &trial, limits)?;
            if !trial_composition.accepts(&cex) {
                chosen = Some(cand.clone());
                break;
            }
        }
        // When no single event removes the counterexample, take the first
        // candidate anyway; the alphabet still grows every round.
        let chosen = chosen.unwrap_or_else(|| candidates[0].clone());
        sk.insert(union.by_name(&chosen).expect("candidate from union").clone())?;
    }
}

/// The coordinator of the standard construction: the synchronous product
/// of the plant projections onto Σk. The composition is not trimmed; the
/// coordinator keeps the full projected behavior.
pub fn build_coordinator(
    plants: &[&Generator],
    sigma_k: &EventSet,
    limits: &Limits,
) -> Result<Generator> {
    let mut covered = EventSet::new();
    let mut parts = Vec::with_capacity(plants.len());
    for g in plants {
        let target = g.alphabet().intersect(sigma_k);
        for e in target.iter() {
            if !covered.contains(&e.name) {
                covered.insert(e.clone())?;
            }
        }
        parts.push(project_onto(
            g,
            target.names().iter().map(|s| s.as_str()),
            limits,
        )?);
    }
    if !sigma_k.is_subset_of(&covered) {
        return Err(Error::InvalidProblem(format!(
            "coordinator events {} must lie inside the union of the plant alphabets",
            sigma_k.minus(&covered)
        )));
    }
    let refs: Vec<&Generator> = parts.iter().collect();
    let mut gk = sync_product_all(&refs)?;
    gk.set_name("Gk");
    Ok(gk)
}

/// Outcome of one controllability condition inside the conditional
/// controllability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConditionOutcome {
    Verdict(ControllabilityVerdict),
    /// The projected specification escapes the condition's plant already
    /// at the closed-language level.
    SpecNotInPlant { witness: Word },
}

impl ConditionOutcome {
    pub fn holds(&self) -> bool {
        matches!(
            self,
            ConditionOutcome::Verdict(ControllabilityVerdict {
                controllable: true,
                ..
            })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondCheckItem<T> {
    pub label: String,
    pub outcome: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondControllabilityReport {
    pub holds: bool,
    pub conditions: Vec<CondCheckItem<ConditionOutcome>>,
    /// Lm(K) ⊆ Lm(G1 ∥ … ∥ Gn ∥ Gk), the standing assumption of the
    /// definition, reported rather than enforced.
    pub spec_in_plant: InclusionVerdict,
}

/// Conditional controllability: Pk(K) controllable against the
/// coordinator, and each P_{i+k}(K) controllable against its local plant
/// composed with the closure of Pk(K).
pub fn is_conditionally_controllable(
    spec: &Generator,
    plants: &[&Generator],
    coordinator: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<CondControllabilityReport> {
    let full = spec.alphabet().clone();
    let sigma_k = coordinator.alphabet().clone();

    let mut all = Vec::new();
    for g in plants {
        all.push(*g);
    }
    all.push(coordinator);
    let whole = sync_product_all(&all)?;
    let spec_in_plant = language_inclusion(spec, &whole, Mode::Marked);

    let spec_k = project_onto(spec, sigma_k.names().iter().map(|s| s.as_str()), limits)?;
    let mut conditions = Vec::new();
    let unctrl_k = sigma_k.intersect(uncontrollable);
    conditions.push(CondCheckItem {
        label: "P_k(K) w.r.t. L(G_k)".to_string(),
        outcome: run_condition(&spec_k, coordinator, &unctrl_k, limits)?,
    });

    let spec_k_closure = spec_k.prefix_closure();
    for (i, g) in plants.iter().enumerate() {
        let sigma_ik = union_target(&full, g.alphabet(), &sigma_k);
        let spec_ik = project_onto(spec, sigma_ik.names().iter().map(|s| s.as_str()), limits)?;
        let local_plant = sync_product(g, &spec_k_closure)?;
        let unctrl_ik = sigma_ik.intersect(uncontrollable);
        conditions.push(CondCheckItem {
            label: format!("P_{{{}+k}}(K) w.r.t. L(G_{0}) || closure(P_k(K))", i + 1),
            outcome: run_condition(&spec_ik, &local_plant, &unctrl_ik, limits)?,
        });
    }
    Ok(CondControllabilityReport {
        holds: conditions.iter().all(|c| c.outcome.holds()),
        conditions,
        spec_in_plant,
    })
}

fn run_condition(
    spec: &Generator,
    plant: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<ConditionOutcome> {
    match is_controllable(spec, plant, uncontrollable, limits) {
        Ok(v) => Ok(ConditionOutcome::Verdict(v)),
        Err(Error::SpecNotSublanguage { witness }) => {
            Ok(ConditionOutcome::SpecNotInPlant { witness })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondClosednessReport {
    pub holds: bool,
    pub conditions: Vec<CondCheckItem<LmClosedVerdict>>,
}

/// Conditional closedness: Pk(K) is Lm(Gk)-closed and each P_{i+k}(K) is
/// Lm(G_i) ∥ Pk(K)-closed.
pub fn is_conditionally_closed(
    spec: &Generator,
    plants: &[&Generator],
    coordinator: &Generator,
    limits: &Limits,
) -> Result<CondClosednessReport> {
    let full = spec.alphabet().clone();
    let sigma_k = coordinator.alphabet().clone();
    let spec_k = project_onto(spec, sigma_k.names().iter().map(|s| s.as_str()), limits)?;

    let mut conditions = Vec::new();
    conditions.push(CondCheckItem {
        label: "P_k(K) is Lm(G_k)-closed".to_string(),
        outcome: is_lm_closed(&spec_k, coordinator),
    });
    for (i, g) in plants.iter().enumerate() {
        let sigma_ik = union_target(&full, g.alphabet(), &sigma_k);
        let spec_ik = project_onto(spec, sigma_ik.names().iter().map(|s| s.as_str()), limits)?;
        let reference = sync_product(g, &spec_k)?;
        conditions.push(CondCheckItem {
            label: format!("P_{{{}+k}}(K) is Lm(G_{0}) || P_k(K)-closed", i + 1),
            outcome: is_lm_closed(&spec_ik, &reference),
        });
    }
    Ok(CondClosednessReport {
        holds: conditions.iter().all(|c| c.outcome.closed),
        conditions,
    })
}

/// The synthesized supervisors: the coordinator-level supremal
/// controllable sublanguage and one local supervisor per plant, computed
/// in that order since the coordinator supervisor feeds the local plants.
#[derive(Debug, Clone, Serialize)]
pub struct StarReport {
    pub coordinator: Generator,
    pub sup_k: Generator,
    pub sup_locals: Vec<Generator>,
    /// P_k(supC_{i+k}) ⊆ supC_k, which always holds.
    pub projection_inclusions: Vec<InclusionVerdict>,
    /// supC_k ⊆ P_k(supC_{i+k}); when all hold, the composition of the
    /// local supervisors is the supremal conditionally controllable
    /// sublanguage.
    pub inclusion_checks: Vec<InclusionVerdict>,
}

impl StarReport {
    pub fn inclusion_holds(&self) -> bool {
        self.inclusion_checks.iter().all(|v| v.holds)
    }
}

/// Runs the synthesis equations: supC_k against the coordinator, then each
/// supC_{i+k} against L(G_i) ∥ closure(supC_k).
///
/// The computations run on spec/plant products, so each supervisor is the
/// supremal controllable sublanguage of the projected specification
/// intersected with the plant's marked behavior; the projected
/// specification need not be contained in the plant.
pub fn synthesize_star(problem: &CoordinationProblem, limits: &Limits) -> Result<StarReport> {
    problem.validate()?;
    let full = problem.full_alphabet();
    let sigma_k = full.intersect(&problem.sigma_k);
    let plants: Vec<&Generator> = problem.plants.iter().collect();
    let coordinator = build_coordinator(&plants, &sigma_k, limits)?;
    synthesize_star_with(problem, &coordinator, limits)
}

pub(crate) fn synthesize_star_with(
    problem: &CoordinationProblem,
    coordinator: &Generator,
    limits: &Limits,
) -> Result<StarReport> {
    let full = problem.full_alphabet();
    let sigma_k = full.intersect(&problem.sigma_k);
    let unctrl = problem.uncontrollable();

    let spec_k = project_onto(&problem.spec, sigma_k.names().iter().map(|s| s.as_str()), limits)?;
    let mut sup_k = sup_c_product(&spec_k, coordinator, &sigma_k.intersect(&unctrl), limits)?;
    sup_k.set_name("supC_k");

    // The local plant is G_i supervised by the coordinator supervisor: its
    // generated language is L(G_i) ∥ closure(supC_k) (supC_k is trim) and
    // its marked language is Lm(G_i) ∥ supC_k.
    let mut sup_locals = Vec::new();
    for (i, g) in problem.plants.iter().enumerate() {
        let sigma_ik = union_target(&full, g.alphabet(), &sigma_k);
        let spec_ik = project_onto(
            &problem.spec,
            sigma_ik.names().iter().map(|s| s.as_str()),
            limits,
        )?;
        let local_plant = sync_product(g, &sup_k)?;
        let mut sup_i = sup_c_product(&spec_ik, &local_plant, &sigma_ik.intersect(&unctrl), limits)?;
        sup_i.set_name(format!("supC_{{{}+k}}", i + 1));
        sup_locals.push(sup_i);
    }

    let mut projection_inclusions = Vec::new();
    let mut inclusion_checks = Vec::new();
    for sup_i in &sup_locals {
        let projected = project_onto(sup_i, sigma_k.names().iter().map(|s| s.as_str()), limits)?;
        projection_inclusions.push(language_inclusion(&projected, &sup_k, Mode::Marked));
        inclusion_checks.push(language_inclusion(&sup_k, &projected, Mode::Marked));
    }
    Ok(StarReport {
        coordinator: coordinator.clone(),
        sup_k,
        sup_locals,
        projection_inclusions,
        inclusion_checks,
    })
}

/// Re-evaluates the inclusion supC_k ⊆ P_k(supC_{i+k}) for each plant.
pub fn check_inclusion(
    sup_k: &Generator,
    sup_locals: &[Generator],
    sigma_k: &EventSet,
    limits: &Limits,
) -> Result<Vec<InclusionVerdict>> {
    sup_locals
        .iter()
        .map(|s| {
            let projected = project_onto(s, sigma_k.names().iter().map(|n| n.as_str()), limits)?;
            Ok(language_inclusion(sup_k, &projected, Mode::Marked))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefineIteration {
    pub sup_k_states: usize,
    pub inclusion_holds: bool,
}

/// Result of the refinement recursion. Whether it terminates with the
/// supremal language in general is open; the trace is exposed and
/// non-convergence within the iteration limit is data, not an error.
#[derive(Debug, Clone, Serialize)]
pub struct RefineReport {
    pub sup_k: Generator,
    pub sup_locals: Vec<Generator>,
    pub iterations: usize,
    pub converged: bool,
    pub inclusion_checks: Vec<InclusionVerdict>,
    pub trace: Vec<RefineIteration>,
}

/// Refinement pass: replace supC_k by the supremal controllable
/// sublanguage of ∩ P_k(supC_{i+k}) against the coordinator, recompute the
/// local supervisors against the shrunk coordinator behavior, and repeat
/// until the inclusion check holds or the iteration limit is reached.
pub fn refine_doublestar(
    problem: &CoordinationProblem,
    star: &StarReport,
    limits: &Limits,
) -> Result<RefineReport> {
    let full = problem.full_alphabet();
    let sigma_k = full.intersect(&problem.sigma_k);
    let unctrl = problem.uncontrollable();
    let limit = problem.options.refine_limit;

    let mut sup_k = star.sup_k.clone();
    let mut sup_locals = star.sup_locals.clone();
    let mut inclusion = check_inclusion(&sup_k, &sup_locals, &sigma_k, limits)?;
    let mut trace = vec![RefineIteration {
        sup_k_states: sup_k.state_count(),
        inclusion_holds: inclusion.iter().all(|v| v.holds),
    }];
    let mut iterations = 0;

    while !inclusion.iter().all(|v| v.holds) && iterations < limit {
        limits.check_cancelled()?;
        // Intersection of the coordinator-level projections.
        let mut projections = Vec::new();
        for s in &sup_locals {
            projections.push(project_onto(
                s,
                sigma_k.names().iter().map(|n| n.as_str()),
                limits,
            )?);
        }
        let refs: Vec<&Generator> = projections.iter().collect();
        let intersection = sync_product_all(&refs)?;
        let mut new_k = sup_c_product(
            &intersection,
            &star.coordinator,
            &sigma_k.intersect(&unctrl),
            limits,
        )?;
        new_k.set_name("supC_k'");

        let mut new_locals = Vec::new();
        for (i, g) in problem.plants.iter().enumerate() {
            let sigma_ik = union_target(&full, g.alphabet(), &sigma_k);
            let local_plant = sync_product(g, &new_k)?;
            let mut refined = sup_c_product(
                &sup_locals[i],
                &local_plant,
                &sigma_ik.intersect(&unctrl),
                limits,
            )?;
            refined.set_name(format!("supC_{{{}+k}}'", i + 1));
            new_locals.push(refined);
        }
        sup_k = new_k;
        sup_locals = new_locals;
        iterations += 1;
        inclusion = check_inclusion(&sup_k, &sup_locals, &sigma_k, limits)?;
        trace.push(RefineIteration {
            sup_k_states: sup_k.state_count(),
            inclusion_holds: inclusion.iter().all(|v| v.holds),
        });
    }

    Ok(RefineReport {
        converged: inclusion.iter().all(|v| v.holds),
        sup_k,
        sup_locals,
        iterations,
        inclusion_checks: inclusion,
        trace,
    })
}

/// Everything the solve pipeline learns, including the synthesized
/// supervisors and every hypothesis verdict with its counterexample.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisReport {
    pub sigma_k_given: Vec<String>,
    pub sigma_k_used: Vec<String>,
    pub sigma_k_extended: bool,
    pub cd: CdVerdict,
    pub cd_closure: Option<CdVerdict>,
    pub conditionally_independent: IndependenceVerdict,
    /// Lm(K) ⊆ Lm(G1 ∥ … ∥ Gn ∥ Gk).
    pub spec_in_plant: InclusionVerdict,
    pub star: StarReport,
    pub cond_controllable: CondControllabilityReport,
    pub cond_closed: CondClosednessReport,
    pub refine: Option<RefineReport>,
    /// Trim composition of the local supervisors.
    pub composed_locals: Generator,
    /// Composition-equals-specification check, evaluated when the
    /// specification itself is conditionally controllable and closed.
    pub specification_achieved: Option<EqualityVerdict>,
}

/// Full pipeline: extend Σk for conditional decomposability when needed,
/// build the coordinator, synthesize the supervisors, evaluate every
/// hypothesis, refine when the inclusion check fails, and compose the
/// local supervisors. Mathematical failures are report flags; only
/// malformed input or resource exhaustion errors out.
pub fn solve(problem: &CoordinationProblem, limits: &Limits) -> Result<SynthesisReport> {
    problem.validate()?;
    let alphabets = problem.alphabets();
    let full = problem.full_alphabet();
    let sigma_k_given = full.intersect(&problem.sigma_k);

    let mut sigma_k = sigma_k_given.clone();
    let mut cd = is_conditionally_decomposable(&problem.spec, &alphabets, &sigma_k, Mode::Marked, limits)?;
    let mut cd_closure = if problem.options.require_closure_cd {
        Some(is_conditionally_decomposable(
            &problem.spec,
            &alphabets,
            &sigma_k,
            Mode::Closed,
            limits,
        )?)
    } else {
        None
    };
    let needs_extension =
        !cd.holds || cd_closure.as_ref().is_some_and(|v| !v.holds);
    if needs_extension {
        sigma_k = extend_for_cd(
            &problem.spec,
            &alphabets,
            &sigma_k,
            problem.options.require_closure_cd,
            limits,
        )?;
        cd = is_conditionally_decomposable(&problem.spec, &alphabets, &sigma_k, Mode::Marked, limits)?;
        cd_closure = if problem.options.require_closure_cd {
            Some(is_conditionally_decomposable(
                &problem.spec,
                &alphabets,
                &sigma_k,
                Mode::Closed,
                limits,
            )?)
        } else {
            None
        };
    }

    let effective = CoordinationProblem {
        plants: problem.plants.clone(),
        spec: problem.spec.clone(),
        sigma_k: sigma_k.clone(),
        options: problem.options.clone(),
    };
    let plants: Vec<&Generator> = effective.plants.iter().collect();
    let coordinator = build_coordinator(&plants, &sigma_k, limits)?;
    let conditionally_independent_v = conditionally_independent(&plants, &coordinator);

    let star = synthesize_star_with(&effective, &coordinator, limits)?;
    let unctrl = effective.uncontrollable();
    let cond_controllable =
        is_conditionally_controllable(&effective.spec, &plants, &coordinator, &unctrl, limits)?;
    let cond_closed = is_conditionally_closed(&effective.spec, &plants, &coordinator, limits)?;

    let mut all = plants.clone();
    all.push(&coordinator);
    let whole = sync_product_all(&all)?;
    let spec_in_plant = language_inclusion(&effective.spec, &whole, Mode::Marked);

    let refine = if star.inclusion_holds() {
        None
    } else {
        Some(refine_doublestar(&effective, &star, limits)?)
    };

    let local_refs: Vec<&Generator> = star.sup_locals.iter().collect();
    let composed_locals = sync_product_all(&local_refs)?.trim();
    let specification_achieved = if cond_controllable.holds && cond_closed.holds {
        Some(language_equality(&composed_locals, &effective.spec, Mode::Marked))
    } else {
        None
    };

    Ok(SynthesisReport {
        sigma_k_given: sigma_k_given.names(),
        sigma_k_used: sigma_k.names(),
        sigma_k_extended: needs_extension,
        cd,
        cd_closure,
        conditionally_independent: conditionally_independent_v,
        spec_in_plant,
        star,
        cond_controllable,
        cond_closed,
        refine,
        composed_locals,
        specification_achieved,
    })
}
