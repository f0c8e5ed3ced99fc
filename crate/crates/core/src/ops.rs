//! Language algebra on generators: synchronous product, natural projection,
//! inverse projection.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::event::{EventSet, ProjectionSpec};
use crate::generator::Generator;
use crate::limits::Limits;

/// Synchronous product. Shared events synchronize, private events
/// interleave; only reachable pairs are built, and a pair is marked iff
/// both components are. Errors when the alphabets disagree on a flag.
pub fn sync_product(a: &Generator, b: &Generator) -> Result<Generator> {
    let alphabet = a.alphabet().union(b.alphabet())?;
    let (Some(ia), Some(ib)) = (a.initial(), b.initial()) else {
        return Ok(Generator::empty(alphabet));
    };

    // Per union event: its index in each component, if present.
    let views: Vec<(Option<usize>, Option<usize>)> = alphabet
        .iter()
        .map(|e| (a.alphabet().position(&e.name), b.alphabet().position(&e.name)))
        .collect();

    let mut builder = Generator::builder(format!("{}||{}", a.name(), b.name()), alphabet.clone());
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let intern = |builder: &mut crate::generator::GeneratorBuilder,
                      queue: &mut VecDeque<(usize, usize)>,
                      index: &mut HashMap<(usize, usize), usize>,
                      sa: usize,
                      sb: usize|
     -> usize {
        *index.entry((sa, sb)).or_insert_with(|| {
            let name = format!("({},{})", a.state_name(sa), b.state_name(sb));
            let idx = builder.add_state(name, a.is_marked(sa) && b.is_marked(sb));
            queue.push_back((sa, sb));
            idx
        })
    };

    let start = intern(&mut builder, &mut queue, &mut index, ia, ib);
    builder.set_initial(start);

    while let Some((sa, sb)) = queue.pop_front() {
        let src = index[&(sa, sb)];
        for (e, &(ea, eb)) in views.iter().enumerate() {
            let next_a = match ea {
                Some(ea) => match a.step(sa, ea) {
                    Some(d) => d,
                    None => continue,
                },
                None => sa,
            };
            let next_b = match eb {
                Some(eb) => match b.step(sb, eb) {
                    Some(d) => d,
                    None => continue,
                },
                None => sb,
            };
            let dst = intern(&mut builder, &mut queue, &mut index, next_a, next_b);
            let name = alphabet.name(e).to_string();
            builder.add_transition_idx(src, &name, dst)?;
        }
    }
    Ok(builder.build())
}

/// n-ary synchronous product, folded left to right.
pub fn sync_product_all(gens: &[&Generator]) -> Result<Generator> {
    match gens {
        [] => Err(Error::InvalidProblem(
            "synchronous product needs at least one generator".into(),
        )),
        [only] => Ok((*only).clone()),
        [first, rest @ ..] => {
            let mut acc = (*first).clone();
            for g in rest {
                acc = sync_product(&acc, g)?;
            }
            Ok(acc)
        }
    }
}

/// Natural projection of a generator, realized by erasing the hidden
/// events and determinizing via subset construction. A subset state is
/// marked iff it contains a marked state. The number of subset states is
/// capped by `limits.determinization_cap`.
pub fn project(g: &Generator, spec: &ProjectionSpec, limits: &Limits) -> Result<Generator> {
    if !spec.source().same_names(g.alphabet()) {
        return Err(Error::AlphabetMismatch(format!(
            "projection source {} does not match the generator alphabet {}",
            spec.source(),
            g.alphabet()
        )));
    }
    Ok(project_subsets(g, spec.target(), limits)?.0)
}

/// Projection onto the named events of the generator's own alphabet.
pub fn project_onto<'a, I: IntoIterator<Item = &'a str>>(
    g: &Generator,
    names: I,
    limits: &Limits,
) -> Result<Generator> {
    let spec = ProjectionSpec::onto(g.alphabet().clone(), names)?;
    project(g, &spec, limits)
}

/// Subset construction; also returns, per projected state, the sorted set
/// of source states it stands for. Internal checks (observer, consistency)
/// need that correspondence.
pub(crate) fn project_subsets(
    g: &Generator,
    target: &EventSet,
    limits: &Limits,
) -> Result<(Generator, Vec<Vec<usize>>)> {
    let target = g
        .alphabet()
        .restrict_to(target.names().iter().map(|s| s.as_str()))?;
    let Some(init) = g.initial() else {
        return Ok((Generator::empty(target), Vec::new()));
    };
    let hidden: Vec<bool> = g
        .alphabet()
        .iter()
        .map(|e| !target.contains(&e.name))
        .collect();

    // Forward closure over hidden transitions.
    let eclose = |seed: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = seed.clone();
        let mut queue: VecDeque<usize> = seed.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for (e, d) in g.enabled(s) {
                if hidden[e] && out.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        out
    };

    let subset_name = |subset: &BTreeSet<usize>| -> String {
        let names: Vec<&str> = subset.iter().map(|&s| g.state_name(s)).collect();
        format!("{{{}}}", names.join(","))
    };

    let mut builder = Generator::builder(format!("P({})", g.name()), target.clone());
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();

    let start = eclose(&BTreeSet::from([init]));
    let start_idx = builder.add_state(
        subset_name(&start),
        start.iter().any(|&s| g.is_marked(s)),
    );
    subsets.push(start.iter().copied().collect());
    index.insert(start.clone(), start_idx);
    queue.push_back(start);
    builder.set_initial(start_idx);

    while let Some(subset) = queue.pop_front() {
        limits.check_cancelled()?;
        let src = index[&subset];
        for (t_idx, ev) in target.iter().enumerate() {
            let g_idx = g
                .alphabet()
                .position(&ev.name)
                .expect("target is a subalphabet");
            let mut moved = BTreeSet::new();
            for &s in &subset {
                if let Some(d) = g.step(s, g_idx) {
                    moved.insert(d);
                }
            }
            if moved.is_empty() {
                continue;
            }
            let next = eclose(&moved);
            let dst = match index.get(&next) {
                Some(&i) => i,
                None => {
                    if index.len() >= limits.determinization_cap {
                        return Err(Error::DeterminizationCap {
                            cap: limits.determinization_cap,
                        });
                    }
                    let i = builder.add_state(
                        subset_name(&next),
                        next.iter().any(|&s| g.is_marked(s)),
                    );
                    subsets.push(next.iter().copied().collect());
                    index.insert(next.clone(), i);
                    queue.push_back(next);
                    i
                }
            };
            let name = target.name(t_idx).to_string();
            builder.add_transition_idx(src, &name, dst)?;
        }
    }
    Ok((builder.build(), subsets))
}

/// Inverse projection: lifts a generator over a subalphabet to a full
/// alphabet by self-looping every state on the new events. The result
/// recognizes exactly the inverse image of L and Lm.
pub fn inverse_project(g: &Generator, full: &EventSet) -> Result<Generator> {
    if !g.alphabet().is_subset_of(full) {
        return Err(Error::AlphabetMismatch(format!(
            "generator alphabet {} is not a subset of the full alphabet {}",
            g.alphabet(),
            full
        )));
    }
    for e in g.alphabet().iter() {
        let f = full.by_name(&e.name).expect("subset checked above");
        if f.controllable != e.controllable {
            return Err(Error::FlagConflict {
                name: e.name.clone(),
            });
        }
    }
    if g.is_empty_generator() {
        return Ok(Generator::empty(full.clone()));
    }
    let mut builder = Generator::builder(g.name().to_string(), full.clone());
    for i in 0..g.state_count() {
        builder.add_state(g.state_name(i).to_string(), g.is_marked(i));
    }
    builder.set_initial(g.initial().unwrap());
    for (s, e, d) in g.transitions() {
        let name = g.alphabet().name(e).to_string();
        builder.add_transition_idx(s, &name, d)?;
    }
    for e in full.iter() {
        if !g.alphabet().contains(&e.name) {
            for s in 0..g.state_count() {
                builder.add_transition_idx(s, &e.name, s)?;
            }
        }
    }
    Ok(builder.build())
}
