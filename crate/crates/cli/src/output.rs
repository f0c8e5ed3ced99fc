//! Report rendering: JSON for machines, short lines for humans. Field
//! order in the JSON is fixed by the struct declarations, so identical
//! inputs give byte-identical reports.

use std::path::PathBuf;

use serde::Serialize;

use descoord_core::coordination::{
    CdVerdict, CondClosednessReport, CondControllabilityReport, ConditionOutcome,
    IndependenceVerdict, RefineReport, StarReport, SynthesisReport,
};
use descoord_core::minext::ExtensionResult;
use descoord_core::nonblocking::NonblockingResult;
use descoord_core::observer::{LccVerdict, ObserverVerdict};
use descoord_core::supervisory::ControllabilityVerdict;
use descoord_core::words::Word;

use crate::CliError;

pub enum SynthKind {
    Solve,
    Star,
    Refine,
}

fn word_str(w: &Word) -> String {
    w.0.join(" ")
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Report {
    Cd {
        check: &'static str,
        closure: bool,
        cd: bool,
        counterexample: Option<String>,
    },
    Controllable {
        check: &'static str,
        controllable: bool,
        witness: Option<ControllabilityWitnessOut>,
    },
    Conditional {
        check: &'static str,
        holds: bool,
        conditions: Vec<ConditionOut>,
    },
    Observer {
        check: &'static str,
        observer: bool,
        witness: Option<ObserverWitnessOut>,
    },
    Lcc {
        check: &'static str,
        lcc: bool,
        witness: Option<LccWitnessOut>,
    },
    Nonblocking {
        check: &'static str,
        nonblocking: bool,
    },
    Independent {
        check: &'static str,
        conditionally_independent: bool,
        offending: Vec<String>,
    },
    Minext {
        solver: &'static str,
        extension: Vec<String>,
        cardinality: usize,
        certified_minimal: bool,
        nodes_explored: usize,
    },
    NonblockingCoordinator {
        sigma_0: Vec<String>,
        coordinator_states: usize,
        composed_nonblocking: bool,
        composed_controllable: bool,
    },
}

#[derive(Serialize)]
pub struct ControllabilityWitnessOut {
    pub word: String,
    pub event: String,
}

#[derive(Serialize)]
pub struct ConditionOut {
    pub label: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct ObserverWitnessOut {
    pub word: String,
    pub projected: String,
}

#[derive(Serialize)]
pub struct LccWitnessOut {
    pub word: String,
    pub event: String,
    pub bypass: String,
}

impl Report {
    pub fn cd(closure: bool, v: &CdVerdict) -> Report {
        Report::Cd {
            check: "cd",
            closure,
            cd: v.holds,
            counterexample: v.counterexample.as_ref().map(word_str),
        }
    }

    pub fn controllable(v: &ControllabilityVerdict) -> Report {
        Report::Controllable {
            check: "controllable",
            controllable: v.controllable,
            witness: v.witness.as_ref().map(|w| ControllabilityWitnessOut {
                word: word_str(&w.word),
                event: w.event.clone(),
            }),
        }
    }

    pub fn conditionally_controllable(v: &CondControllabilityReport) -> Report {
        Report::Conditional {
            check: "conditionally-controllable",
            holds: v.holds,
            conditions: v
                .conditions
                .iter()
                .map(|c| ConditionOut {
                    label: c.label.clone(),
                    holds: c.outcome.holds(),
                    witness: match &c.outcome {
                        ConditionOutcome::Verdict(cv) => cv
                            .witness
                            .as_ref()
                            .map(|w| format!("{} · {}", word_str(&w.word), w.event)),
                        ConditionOutcome::SpecNotInPlant { witness } => {
                            Some(format!("spec escapes plant at {}", word_str(witness)))
                        }
                    },
                })
                .collect(),
        }
    }

    pub fn conditionally_closed(v: &CondClosednessReport) -> Report {
        Report::Conditional {
            check: "conditionally-closed",
            holds: v.holds,
            conditions: v
                .conditions
                .iter()
                .map(|c| ConditionOut {
                    label: c.label.clone(),
                    holds: c.outcome.closed,
                    witness: c.outcome.witness.as_ref().map(word_str),
                })
                .collect(),
        }
    }

    pub fn observer(v: &ObserverVerdict) -> Report {
        Report::Observer {
            check: "observer",
            observer: v.holds,
            witness: v.witness.as_ref().map(|w| ObserverWitnessOut {
                word: word_str(&w.word),
                projected: word_str(&w.projected),
            }),
        }
    }

    pub fn lcc(v: &LccVerdict) -> Report {
        Report::Lcc {
            check: "lcc",
            lcc: v.holds,
            witness: v.witness.as_ref().map(|w| LccWitnessOut {
                word: word_str(&w.word),
                event: w.event.clone(),
                bypass: word_str(&w.bypass),
            }),
        }
    }

    pub fn nonblocking(holds: bool) -> Report {
        Report::Nonblocking {
            check: "nonblocking",
            nonblocking: holds,
        }
    }

    pub fn independent(v: &IndependenceVerdict) -> Report {
        Report::Independent {
            check: "independent",
            conditionally_independent: v.holds,
            offending: v.offending.clone(),
        }
    }

    pub fn minext(exact: bool, r: &ExtensionResult) -> Report {
        Report::Minext {
            solver: if exact { "exact" } else { "greedy" },
            extension: r.extension.clone(),
            cardinality: r.cardinality,
            certified_minimal: r.certified_minimal,
            nodes_explored: r.nodes_explored,
        }
    }

    pub fn nonblocking_coordinator(r: &NonblockingResult) -> Report {
        Report::NonblockingCoordinator {
            sigma_0: r.sigma_0.clone(),
            coordinator_states: r.coordinator.state_count(),
            composed_nonblocking: r.composed_nonblocking,
            composed_controllable: r.composed_controllable,
        }
    }

    pub fn emit(&self, json: bool) {
        if json {
            println!(
                "{}",
                serde_json::to_string_pretty(self).expect("reports are serializable")
            );
            return;
        }
        match self {
            Report::Cd {
                closure,
                cd,
                counterexample,
                ..
            } => {
                let what = if *closure { "closure" } else { "language" };
                println!("conditionally decomposable ({what}): {cd}");
                if let Some(w) = counterexample {
                    println!("counterexample: {w}");
                }
            }
            Report::Controllable {
                controllable,
                witness,
                ..
            } => {
                println!("controllable: {controllable}");
                if let Some(w) = witness {
                    println!("witness: {} · {}", w.word, w.event);
                }
            }
            Report::Conditional {
                check,
                holds,
                conditions,
            } => {
                println!("{check}: {holds}");
                for c in conditions {
                    match &c.witness {
                        Some(w) => println!("  {}: {} ({w})", c.label, c.holds),
                        None => println!("  {}: {}", c.label, c.holds),
                    }
                }
            }
            Report::Observer { observer, witness, .. } => {
                println!("observer: {observer}");
                if let Some(w) = witness {
                    println!("witness: word `{}`, projected `{}`", w.word, w.projected);
                }
            }
            Report::Lcc { lcc, witness, .. } => {
                println!("locally control consistent: {lcc}");
                if let Some(w) = witness {
                    println!(
                        "witness: word `{}`, event `{}`, bypass `{}`",
                        w.word, w.event, w.bypass
                    );
                }
            }
            Report::Nonblocking { nonblocking, .. } => println!("nonblocking: {nonblocking}"),
            Report::Independent {
                conditionally_independent,
                offending,
                ..
            } => {
                println!("conditionally independent: {conditionally_independent}");
                if !offending.is_empty() {
                    println!("offending events: {}", offending.join(", "));
                }
            }
            Report::Minext {
                solver,
                extension,
                cardinality,
                certified_minimal,
                nodes_explored,
            } => {
                println!("solver: {solver}");
                println!("extension: [{}]", extension.join(", "));
                println!("cardinality: {cardinality}");
                println!("certified minimal: {certified_minimal}");
                println!("nodes explored: {nodes_explored}");
            }
            Report::NonblockingCoordinator {
                sigma_0,
                coordinator_states,
                composed_nonblocking,
                composed_controllable,
            } => {
                println!("sigma_0: [{}]", sigma_0.join(", "));
                println!("coordinator states: {coordinator_states}");
                println!("composed nonblocking: {composed_nonblocking}");
                println!("composed controllable: {composed_controllable}");
            }
        }
    }
}

/// Where a large report goes: a file or stdout.
pub struct OutputTarget {
    path: Option<PathBuf>,
}

impl OutputTarget {
    pub fn new(path: Option<PathBuf>) -> Self {
        OutputTarget { path }
    }
}

pub fn print_or_write<T: Serialize>(
    value: &T,
    target: OutputTarget,
    json: bool,
    summarize: impl Fn(&T) -> String,
) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports are serializable");
    text.push('\n');
    match target.path {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display())))?;
            if !json {
                print!("{}", summarize(value));
            }
        }
        None => {
            if json {
                print!("{text}");
            } else {
                print!("{}", summarize(value));
            }
        }
    }
    Ok(())
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn summarize_star(star: &StarReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "coordinator: {} states over {}\n",
        star.coordinator.state_count(),
        star.coordinator.alphabet()
    ));
    out.push_str(&format!(
        "supC_k: {} states{}\n",
        star.sup_k.state_count(),
        if star.sup_k.is_empty_generator() { " (empty language)" } else { "" }
    ));
    for (i, g) in star.sup_locals.iter().enumerate() {
        out.push_str(&format!("supC_{{{}+k}}: {} states\n", i + 1, g.state_count()));
    }
    out.push_str(&format!(
        "inclusion supC_k ⊆ P_k(supC_{{i+k}}): {}\n",
        yesno(star.inclusion_holds())
    ));
    out
}

pub fn summarize_refine(r: &RefineReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "refinement: {} iteration(s), converged: {}\n",
        r.iterations,
        yesno(r.converged)
    ));
    out.push_str(&format!("supC_k': {} states\n", r.sup_k.state_count()));
    for (i, g) in r.sup_locals.iter().enumerate() {
        out.push_str(&format!("supC_{{{}+k}}': {} states\n", i + 1, g.state_count()));
    }
    out
}

pub fn summarize_solve(r: &SynthesisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "coordinator events: [{}]{}\n",
        r.sigma_k_used.join(", "),
        if r.sigma_k_extended { " (extended)" } else { "" }
    ));
    out.push_str(&format!("conditionally decomposable: {}\n", yesno(r.cd.holds)));
    if let Some(c) = &r.cd_closure {
        out.push_str(&format!("closure decomposable: {}\n", yesno(c.holds)));
    }
    out.push_str(&format!(
        "conditionally independent: {}\n",
        yesno(r.conditionally_independent.holds)
    ));
    out.push_str(&format!(
        "conditionally controllable: {}\n",
        yesno(r.cond_controllable.holds)
    ));
    out.push_str(&format!(
        "conditionally closed: {}\n",
        yesno(r.cond_closed.holds)
    ));
    out.push_str(&summarize_star(&r.star));
    if let Some(refined) = &r.refine {
        out.push_str(&summarize_refine(refined));
    }
    out.push_str(&format!(
        "composed supervisors: {} states\n",
        r.composed_locals.state_count()
    ));
    if let Some(eq) = &r.specification_achieved {
        out.push_str(&format!("specification achieved exactly: {}\n", yesno(eq.holds)));
    }
    out
}
