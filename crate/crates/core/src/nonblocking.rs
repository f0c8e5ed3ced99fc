//! Coordinator for nonblockingness: extend the coordinator alphabet until
//! the projections are observers for both local supervisors, then take the
//! supremal controllable sublanguage of the composed projections as the
//! coordinator language.

use serde::Serialize;

use crate::compare::{language_equality, EqualityVerdict, Mode};
use crate::coordination::ConditionOutcome;
use crate::error::{Error, Result};
use crate::event::{EventSet, ProjectionSpec};
use crate::generator::Generator;
use crate::limits::Limits;
use crate::observer::extend_to_observer;
use crate::ops::{project_onto, sync_product, sync_product_all};
use crate::supervisory::{is_controllable, sup_c};

#[derive(Debug, Clone, Serialize)]
pub struct NonblockingResult {
    /// The observer-extended coordinator alphabet Σ0 ⊇ Σk.
    pub sigma_0: Vec<String>,
    /// Minimal nonblocking generator for the coordinator language.
    pub coordinator: Generator,
    /// closure(S1 ∥ S2 ∥ C) = closure(S1) ∥ closure(S2) ∥ closure(C).
    pub composed_nonblocking: bool,
    /// The composition is controllable w.r.t. closure(S1) ∥ closure(S2).
    pub composed_controllable: bool,
}

/// Builds the coordinator for nonblockingness from two local supervisors.
///
/// Σ0 starts at Σk and grows by alternating observer extensions (first
/// supervisor first) until the projection is an observer for both. The
/// coordinator language is the supremal controllable sublanguage of
/// P0(S1) ∥ P0(S2) with respect to closure(P0(S1)) ∥ closure(P0(S2)) and
/// Σ0 ∩ Σu. An EMPTY coordinator is a valid shut-down outcome.
pub fn nonblocking_coordinator(
    sup1: &Generator,
    sup2: &Generator,
    sigma_k: &EventSet,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<NonblockingResult> {
    let universe = sup1.alphabet().union(sup2.alphabet())?;
    if !sigma_k.is_subset_of(&universe) {
        return Err(Error::InvalidProblem(format!(
            "coordinator events {} must lie inside the supervisors' union alphabet {}",
            sigma_k, universe
        )));
    }
    let mut sigma_0 = universe.intersect(sigma_k);

    loop {
        let before = sigma_0.len();
        for sup in [sup1, sup2] {
            let target = sup.alphabet().intersect(&sigma_0);
            let spec = ProjectionSpec::new(sup.alphabet().clone(), &target)?;
            let extended = extend_to_observer(sup, &spec, limits)?;
            for e in extended.iter() {
                if !sigma_0.contains(&e.name) {
                    sigma_0.insert(e.clone())?;
                }
            }
        }
        if sigma_0.len() == before {
            break;
        }
    }
    // Normalize order to the universe's for reproducible output.
    let sigma_0 = universe.intersect(&sigma_0);

    let p1 = project_onto(
        sup1,
        sup1.alphabet().intersect(&sigma_0).names().iter().map(|s| s.as_str()),
        limits,
    )?;
    let p2 = project_onto(
        sup2,
        sup2.alphabet().intersect(&sigma_0).names().iter().map(|s| s.as_str()),
        limits,
    )?;
    let spec = sync_product(&p1, &p2)?;
    let plant = sync_product(&p1.prefix_closure(), &p2.prefix_closure())?;
    let lc = sup_c(&spec, &plant, &sigma_0.intersect(uncontrollable), limits)?;
    let mut coordinator = lc.minimize();
    coordinator.set_name("C");

    let (composed_nonblocking, composed_controllable) =
        composed_flags(sup1, sup2, &coordinator, uncontrollable, limits)?;

    Ok(NonblockingResult {
        sigma_0: sigma_0.names(),
        coordinator,
        composed_nonblocking,
        composed_controllable,
    })
}

fn composed_flags(
    sup1: &Generator,
    sup2: &Generator,
    coordinator: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<(bool, bool)> {
    let composed = sync_product_all(&[sup1, sup2, coordinator])?;
    let closures = sync_product_all(&[
        &sup1.prefix_closure(),
        &sup2.prefix_closure(),
        &coordinator.prefix_closure(),
    ])?;
    let nonconflict = language_equality(&composed.prefix_closure(), &closures, Mode::Marked);

    let supervisor_closures = sync_product(&sup1.prefix_closure(), &sup2.prefix_closure())?;
    let controllable = match is_controllable(&composed, &supervisor_closures, uncontrollable, limits)
    {
        Ok(v) => v.controllable,
        Err(Error::SpecNotSublanguage { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok((nonconflict.holds, controllable))
}

/// The two conclusions of the nonblocking-coordinator theorem, checked by
/// direct language computation against the actual plants.
#[derive(Debug, Clone, Serialize)]
pub struct NonblockingTheoremReport {
    /// closure(S1 ∥ S2 ∥ C) = closure(S1) ∥ closure(S2) ∥ closure(C).
    pub nonconflict: EqualityVerdict,
    /// S1 ∥ S2 ∥ C is controllable w.r.t. L(G1) ∥ L(G2).
    pub controllable: ConditionOutcome,
}

impl NonblockingTheoremReport {
    pub fn both_hold(&self) -> bool {
        self.nonconflict.holds && self.controllable.holds()
    }
}

pub fn verify_nonblocking_theorem(
    sup1: &Generator,
    sup2: &Generator,
    result: &NonblockingResult,
    plants: &[&Generator],
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<NonblockingTheoremReport> {
    let composed = sync_product_all(&[sup1, sup2, &result.coordinator])?;
    let closures = sync_product_all(&[
        &sup1.prefix_closure(),
        &sup2.prefix_closure(),
        &result.coordinator.prefix_closure(),
    ])?;
    let nonconflict = language_equality(&composed.prefix_closure(), &closures, Mode::Marked);

    let plant_refs: Vec<&Generator> = plants.to_vec();
    let plant = sync_product_all(&plant_refs)?;
    let controllable = match is_controllable(&composed, &plant.closed_view(), uncontrollable, limits)
    {
        Ok(v) => ConditionOutcome::Verdict(v),
        Err(Error::SpecNotSublanguage { witness }) => ConditionOutcome::SpecNotInPlant { witness },
        Err(e) => return Err(e),
    };
    Ok(NonblockingTheoremReport {
        nonconflict,
        controllable,
    })
}
