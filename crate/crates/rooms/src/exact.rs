//! Exhaustive and pruned search over feasible assignments: enumeration,
//! Pareto-optimality verification with a dominating witness, improvement
//! chains, and unanimous-best search.
//!
//! All searches share one backtracking engine. Rooms are formed one at a
//! time around a pivot player; equal capacities are merged into one class so
//! every partition is generated exactly once, in canonical form.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{
    dominates_values, is_feasible, room_value, value_profile, Assignment, Coalition,
    CoalitionValue, ComparisonMode, Instance, ModelError, PlayerId, Rank,
};

/// Limits on a single search invocation. Defaults to unlimited; exceeding a
/// limit is an explicit error, never a silent truncation.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn with_node_limit(nodes: u64) -> Self {
        SearchBudget { node_limit: Some(nodes), time_limit: None }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search budget exceeded after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Outcome of Pareto-optimality verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ParetoOptimal,
    /// A feasible assignment dominating the queried one.
    DominatedBy(Assignment),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMethod {
    Pruned,
    Brute,
}

struct Ticker {
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl Ticker {
    fn new(budget: &SearchBudget) -> Self {
        Ticker {
            node_limit: budget.node_limit,
            deadline: budget.time_limit.map(|d| Instant::now() + d),
            nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return Err(SearchError::Budget { nodes: self.nodes });
            }
        }
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(SearchError::Budget { nodes: self.nodes });
                }
            }
        }
        Ok(())
    }
}

/// One capacity value together with the spec slots carrying it.
struct CapClass {
    cap: usize,
    remaining: usize,
    slots: Vec<usize>,
}

fn capacity_classes(inst: &Instance) -> Vec<CapClass> {
    let mut classes: Vec<CapClass> = Vec::new();
    for (idx, &cap) in inst.rooms.capacities().iter().enumerate() {
        match classes.iter_mut().find(|c| c.cap == cap) {
            Some(c) => {
                c.remaining += 1;
                c.slots.push(idx);
            }
            None => classes.push(CapClass { cap, remaining: 1, slots: vec![idx] }),
        }
    }
    classes
}

/// The shared backtracking engine. `value_caps`, when set, restricts every
/// player `i` to rooms she values at rank `<= value_caps[i]`; with
/// `require_strict` at least one player must end up strictly below her cap.
struct PartitionSearch<'a> {
    inst: &'a Instance,
    classes: Vec<CapClass>,
    value_caps: Option<&'a [Rank]>,
    require_strict: bool,
    pivot_by_cap: bool,
    ticker: Ticker,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> PartitionSearch<'a> {
    fn new(inst: &'a Instance, budget: &SearchBudget) -> Self {
        PartitionSearch {
            inst,
            classes: capacity_classes(inst),
            value_caps: None,
            require_strict: false,
            pivot_by_cap: false,
            ticker: Ticker::new(budget),
        }
    }

    /// Runs the search, invoking `on_solution` for every generated
    /// assignment (canonical, no duplicates). Returning `Flow::Stop` from the
    /// callback aborts the search early.
    fn run(
        &mut self,
        on_solution: &mut dyn FnMut(Assignment) -> Flow,
    ) -> Result<(), SearchError> {
        let n = self.inst.n;
        if self.inst.rooms.total() != n {
            return Ok(()); // no assignment can match the capacity multiset
        }
        let mut unassigned = vec![true; n];
        // (class index, members) per formed room, in creation order.
        let mut rooms: Vec<(usize, Vec<PlayerId>)> = Vec::new();
        self.recurse(&mut unassigned, &mut rooms, 0, on_solution)?;
        Ok(())
    }

    fn recurse(
        &mut self,
        unassigned: &mut Vec<bool>,
        rooms: &mut Vec<(usize, Vec<PlayerId>)>,
        strict_count: usize,
        on_solution: &mut dyn FnMut(Assignment) -> Flow,
    ) -> Result<Flow, SearchError> {
        let pivot = match self.pick_pivot(unassigned) {
            Some(p) => p,
            None => {
                if self.require_strict && strict_count == 0 {
                    return Ok(Flow::Continue);
                }
                return Ok(match on_solution(self.build(rooms)) {
                    Flow::Continue => Flow::Continue,
                    Flow::Stop => Flow::Stop,
                });
            }
        };
        unassigned[pivot] = false;
        let pool: Vec<PlayerId> = (0..unassigned.len()).filter(|&j| unassigned[j]).collect();
        for class_idx in 0..self.classes.len() {
            if self.classes[class_idx].remaining == 0 {
                continue;
            }
            let need = self.classes[class_idx].cap - 1;
            if need > pool.len() {
                continue;
            }
            self.classes[class_idx].remaining -= 1;
            let mut members = vec![pivot];
            let flow = self.choose_companions(
                &pool,
                0,
                need,
                &mut members,
                class_idx,
                unassigned,
                rooms,
                strict_count,
                on_solution,
            )?;
            self.classes[class_idx].remaining += 1;
            if matches!(flow, Flow::Stop) {
                unassigned[pivot] = true;
                return Ok(Flow::Stop);
            }
        }
        unassigned[pivot] = true;
        Ok(Flow::Continue)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_companions(
        &mut self,
        pool: &[PlayerId],
        start: usize,
        need: usize,
        members: &mut Vec<PlayerId>,
        class_idx: usize,
        unassigned: &mut Vec<bool>,
        rooms: &mut Vec<(usize, Vec<PlayerId>)>,
        strict_count: usize,
        on_solution: &mut dyn FnMut(Assignment) -> Flow,
    ) -> Result<Flow, SearchError> {
        if need == 0 {
            self.ticker.tick()?;
            let Some(added) = self.room_strict_gain(members) else {
                return Ok(Flow::Continue);
            };
            for &m in members.iter().skip(1) {
                unassigned[m] = false;
            }
            rooms.push((class_idx, members.clone()));
            let flow = self.recurse(unassigned, rooms, strict_count + added, on_solution)?;
            rooms.pop();
            for &m in members.iter().skip(1) {
                unassigned[m] = true;
            }
            return Ok(flow);
        }
        for idx in start..pool.len() {
            if pool.len() - idx < need {
                break;
            }
            let candidate = pool[idx];
            if !self.pairwise_ok(members, candidate) {
                continue;
            }
            members.push(candidate);
            let flow = self.choose_companions(
                pool,
                idx + 1,
                need - 1,
                members,
                class_idx,
                unassigned,
                rooms,
                strict_count,
                on_solution,
            )?;
            members.pop();
            if matches!(flow, Flow::Stop) {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn pick_pivot(&self, unassigned: &[bool]) -> Option<PlayerId> {
        let mut best: Option<PlayerId> = None;
        for (i, &free) in unassigned.iter().enumerate() {
            if !free {
                continue;
            }
            match (self.pivot_by_cap, self.value_caps, best) {
                (_, _, None) => best = Some(i),
                (true, Some(caps), Some(b)) if caps[i] > caps[b] => best = Some(i),
                _ => {}
            }
        }
        best
    }

    /// Incremental check while growing a room: mutual acceptability, and in
    /// Worst mode under value caps also the pairwise rank bounds (a single
    /// roommate above the cap already sinks the room).
    fn pairwise_ok(&self, members: &[PlayerId], candidate: PlayerId) -> bool {
        for &m in members {
            let Some(rm) = self.inst.prefs.rank(m, candidate) else {
                return false;
            };
            let Some(rc) = self.inst.prefs.rank(candidate, m) else {
                return false;
            };
            if let (ComparisonMode::Worst, Some(caps)) = (self.inst.mode, self.value_caps) {
                if rm > caps[m] || rc > caps[candidate] {
                    return false;
                }
            }
        }
        true
    }

    /// Full-room check against the value caps. Returns how many members sit
    /// strictly below their cap, or `None` if the room violates a cap.
    fn room_strict_gain(&self, members: &[PlayerId]) -> Option<usize> {
        let Some(caps) = self.value_caps else {
            return Some(0);
        };
        let mut strict = 0;
        for &i in members {
            match room_value(self.inst, i, members) {
                CoalitionValue::Rank(r) => {
                    if r > caps[i] {
                        return None;
                    }
                    if r < caps[i] {
                        strict += 1;
                    }
                }
                CoalitionValue::Infeasible => return None,
            }
        }
        Some(strict)
    }

    /// Maps formed rooms back onto spec slots and canonicalizes.
    fn build(&self, rooms: &[(usize, Vec<PlayerId>)]) -> Assignment {
        let slots: Vec<Vec<usize>> = self.classes.iter().map(|c| c.slots.clone()).collect();
        let mut cursor = vec![0usize; self.classes.len()];
        let mut out: Vec<Option<Coalition>> = vec![None; self.inst.rooms.len()];
        for (class_idx, members) in rooms {
            let slot = slots[*class_idx][cursor[*class_idx]];
            cursor[*class_idx] += 1;
            out[slot] = Some(Coalition::new(members.clone()));
        }
        let assignment = Assignment::new(out.into_iter().map(Option::unwrap).collect());
        assignment.canonicalize(&self.inst.rooms)
    }
}

/// Every feasible assignment, canonical and duplicate-free.
pub fn enumerate_feasible(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Vec<Assignment>, SearchError> {
    let mut out = Vec::new();
    let mut search = PartitionSearch::new(inst, budget);
    search.run(&mut |a| {
        out.push(a);
        Flow::Continue
    })?;
    Ok(out)
}

/// Some feasible assignment, if one exists.
pub fn find_feasible(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Option<Assignment>, SearchError> {
    let mut found = None;
    let mut search = PartitionSearch::new(inst, budget);
    search.run(&mut |a| {
        found = Some(a);
        Flow::Stop
    })?;
    Ok(found)
}

fn current_ranks(inst: &Instance, a: &Assignment) -> Result<Vec<Rank>, SearchError> {
    if !is_feasible(inst, a)? {
        return Err(ModelError::InfeasibleAssignment.into());
    }
    let values = value_profile(inst, a)?;
    values
        .iter()
        .map(|v| match v {
            CoalitionValue::Rank(r) => Ok(*r),
            CoalitionValue::Infeasible => Err(ModelError::InfeasibleAssignment.into()),
        })
        .collect()
}

/// Searches for a feasible assignment dominating `a`: nobody may exceed her
/// current value and at least one player must improve strictly. Players with
/// the worst current values are grouped first.
fn find_dominator(
    inst: &Instance,
    a: &Assignment,
    budget: &SearchBudget,
) -> Result<Option<Assignment>, SearchError> {
    let caps = current_ranks(inst, a)?;
    let mut found = None;
    let mut search = PartitionSearch::new(inst, budget);
    search.value_caps = Some(&caps);
    search.require_strict = true;
    search.pivot_by_cap = true;
    search.run(&mut |cand| {
        found = Some(cand);
        Flow::Stop
    })?;
    Ok(found)
}

/// Verifies Pareto optimality of `a`, either by pruned backtracking or by a
/// brute scan over all feasible assignments. Both methods return identical
/// verdicts; the witness may differ.
pub fn verify_poa(
    inst: &Instance,
    a: &Assignment,
    method: VerifyMethod,
    budget: &SearchBudget,
) -> Result<Verdict, SearchError> {
    match method {
        VerifyMethod::Pruned => Ok(match find_dominator(inst, a, budget)? {
            Some(w) => Verdict::DominatedBy(w),
            None => Verdict::ParetoOptimal,
        }),
        VerifyMethod::Brute => {
            let v_a = current_ranks(inst, a)?
                .into_iter()
                .map(CoalitionValue::Rank)
                .collect::<Vec<_>>();
            let mut witness = None;
            let mut search = PartitionSearch::new(inst, budget);
            search.run(&mut |cand| {
                let v_c = value_profile(inst, &cand).expect("search yields partitions");
                if dominates_values(&v_c, &v_a) {
                    witness = Some(cand);
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            })?;
            Ok(match witness {
                Some(w) => Verdict::DominatedBy(w),
                None => Verdict::ParetoOptimal,
            })
        }
    }
}

/// Follows a chain of Pareto improvements from `start` until no dominating
/// assignment remains. Returns the terminal assignment and the chain length.
/// The sum of coalition values strictly decreases at every step, which bounds
/// the chain length.
pub fn improve_to_poa(
    inst: &Instance,
    start: &Assignment,
    budget: &SearchBudget,
) -> Result<(Assignment, usize), SearchError> {
    let mut current = start.canonicalize(&inst.rooms);
    let mut potential: u64 = current_ranks(inst, &current)?.iter().map(|&r| r as u64).sum();
    let mut steps = 0;
    while let Some(next) = find_dominator(inst, &current, budget)? {
        let next_potential: u64 = current_ranks(inst, &next)?.iter().map(|&r| r as u64).sum();
        assert!(
            next_potential < potential,
            "improvement step must decrease the rank potential ({next_potential} >= {potential})"
        );
        potential = next_potential;
        current = next;
        steps += 1;
    }
    Ok((current, steps))
}

fn feasible_with_values(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Vec<(Assignment, Vec<CoalitionValue>)>, SearchError> {
    let mut out = Vec::new();
    let mut search = PartitionSearch::new(inst, budget);
    search.run(&mut |a| {
        let v = value_profile(inst, &a).expect("search yields partitions");
        out.push((a, v));
        Flow::Continue
    })?;
    Ok(out)
}

/// A Pareto optimal assignment found by full enumeration, or `None` when no
/// feasible assignment exists.
pub fn find_poa_brute(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Option<Assignment>, SearchError> {
    let all = feasible_with_values(inst, budget)?;
    for (i, (a, v)) in all.iter().enumerate() {
        let dominated = all
            .iter()
            .enumerate()
            .any(|(j, (_, w))| j != i && dominates_values(w, v));
        if !dominated {
            return Ok(Some(a.clone()));
        }
    }
    Ok(None)
}

/// Exactly the feasible assignments that are Pareto optimal.
pub fn enumerate_poa(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Vec<Assignment>, SearchError> {
    let all = feasible_with_values(inst, budget)?;
    let mut out = Vec::new();
    for (i, (a, v)) in all.iter().enumerate() {
        let dominated = all
            .iter()
            .enumerate()
            .any(|(j, (_, w))| j != i && dominates_values(w, v));
        if !dominated {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// A feasible assignment giving every player coalition value 1 (her top
/// rank), if one exists. In Best mode everyone needs some rank-1 roommate;
/// in Worst mode all roommates must be rank 1.
pub fn find_unanimous_best(
    inst: &Instance,
    budget: &SearchBudget,
) -> Result<Option<Assignment>, SearchError> {
    let caps = vec![1 as Rank; inst.n];
    let mut found = None;
    let mut search = PartitionSearch::new(inst, budget);
    search.value_caps = Some(&caps);
    search.run(&mut |a| {
        found = Some(a);
        Flow::Stop
    })?;
    Ok(found)
}
