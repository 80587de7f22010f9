//! Serial dictatorship for the tractable cases: strict complete lists with
//! Best mode and uniform 3-person rooms, and strict complete lists with
//! Worst mode and arbitrary capacities.

use thiserror::Error;

use crate::model::{Assignment, ComparisonMode, Instance, PlayerId};

#[derive(Debug, Error)]
pub enum SdError {
    #[error("dictator order is not a permutation of 0..{n}")]
    BadOrder { n: usize },
    #[error("serial dictatorship requires strict lists")]
    NotStrict,
    #[error("serial dictatorship requires complete lists")]
    NotComplete,
    #[error("this variant requires mode {expected}, instance has {actual}")]
    WrongMode { expected: ComparisonMode, actual: ComparisonMode },
    #[error("this variant requires all rooms of capacity 3")]
    NotTriples,
    #[error("room capacities must be at least 2")]
    TinyRoom,
    #[error("trace replay does not match the instance: {0}")]
    BadTrace(String),
}

/// The order in which players act as dictators; a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictatorOrder {
    order: Vec<PlayerId>,
}

impl DictatorOrder {
    pub fn new(order: Vec<PlayerId>) -> Result<Self, SdError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &p in &order {
            if p >= n || seen[p] {
                return Err(SdError::BadOrder { n });
            }
            seen[p] = true;
        }
        Ok(DictatorOrder { order })
    }

    /// Ascending player id, the default.
    pub fn identity(n: usize) -> Self {
        DictatorOrder { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[PlayerId] {
        &self.order
    }
}

/// One dictator's move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SdAction {
    /// The dictator opens room `room` with `partner`.
    OpenRoom { room: usize, partner: PlayerId },
    /// `mover` joins room `room` (either the dictator moves to her chosen
    /// player's room, or the chosen player moves to the dictator's).
    JoinRoom { room: usize, mover: PlayerId },
    /// The dictator's best available choice is already her roommate.
    NoChange,
    /// The dictator's room is already full (Best/triples) or she is already
    /// assigned (Worst): she takes no action.
    Skip,
    /// The dictator takes room `room` together with `roommates` (Worst mode).
    TakeRoom { room: usize, roommates: Vec<PlayerId> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdStep {
    pub dictator: PlayerId,
    pub action: SdAction,
}

/// The full round-by-round record of a serial dictatorship run. Replaying
/// the steps from the empty state reproduces the returned assignment.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SdTrace {
    pub steps: Vec<SdStep>,
}

impl SdTrace {
    /// Rebuilds the assignment by applying the recorded actions in order.
    pub fn replay(&self, inst: &Instance) -> Result<Assignment, SdError> {
        let k = inst.rooms.len();
        let mut rooms: Vec<Vec<PlayerId>> = vec![Vec::new(); k];
        for step in &self.steps {
            match &step.action {
                SdAction::OpenRoom { room, partner } => {
                    let r = rooms
                        .get_mut(*room)
                        .ok_or_else(|| SdError::BadTrace(format!("room {room} out of range")))?;
                    if !r.is_empty() {
                        return Err(SdError::BadTrace(format!("room {room} opened twice")));
                    }
                    r.push(step.dictator);
                    r.push(*partner);
                }
                SdAction::JoinRoom { room, mover } => {
                    let r = rooms
                        .get_mut(*room)
                        .ok_or_else(|| SdError::BadTrace(format!("room {room} out of range")))?;
                    if r.is_empty() {
                        return Err(SdError::BadTrace(format!("join into unopened room {room}")));
                    }
                    r.push(*mover);
                }
                SdAction::TakeRoom { room, roommates } => {
                    let r = rooms
                        .get_mut(*room)
                        .ok_or_else(|| SdError::BadTrace(format!("room {room} out of range")))?;
                    if !r.is_empty() {
                        return Err(SdError::BadTrace(format!("room {room} taken twice")));
                    }
                    r.push(step.dictator);
                    r.extend_from_slice(roommates);
                }
                SdAction::NoChange | SdAction::Skip => {}
            }
        }
        Ok(Assignment::from_rooms(rooms))
    }
}

fn check_strict_complete(inst: &Instance) -> Result<(), SdError> {
    if !inst.prefs.is_strict() {
        return Err(SdError::NotStrict);
    }
    if !inst.prefs.is_complete() {
        return Err(SdError::NotComplete);
    }
    Ok(())
}

/// Player `i`'s list in strictly descending preference (rank 1 first).
fn strict_list(inst: &Instance, i: PlayerId) -> Vec<PlayerId> {
    let mut others: Vec<PlayerId> = (0..inst.n).filter(|&j| j != i).collect();
    others.sort_by_key(|&j| inst.prefs.rank(i, j).expect("complete list"));
    others
}

/// Serial dictatorship for Best mode with uniform 3-person rooms.
///
/// Each round the current dictator points at her highest-ranked available
/// player `j` and the pair is fixed: if one of the two is already in a room
/// the other joins it, otherwise a new room is opened. `j` is available to
/// dictator `i` when the players already rooming with `i` or `j` number at
/// most one in total (or `i` and `j` already share a room), and, once all
/// rooms are open, only when `j` is already assigned. Dictators in full
/// rooms are skipped; a dictator already with her best available choice
/// changes nothing.
pub fn sd_best_triples(
    inst: &Instance,
    order: &DictatorOrder,
) -> Result<(Assignment, SdTrace), SdError> {
    check_strict_complete(inst)?;
    if inst.mode != ComparisonMode::Best {
        return Err(SdError::WrongMode { expected: ComparisonMode::Best, actual: inst.mode });
    }
    if inst.rooms.capacities().iter().any(|&c| c != 3) {
        return Err(SdError::NotTriples);
    }
    if order.order().len() != inst.n {
        return Err(SdError::BadOrder { n: inst.n });
    }

    let k = inst.rooms.len();
    let mut rooms: Vec<Vec<PlayerId>> = Vec::new();
    let mut room_of: Vec<Option<usize>> = vec![None; inst.n];
    let mut trace = SdTrace::default();

    for &dictator in order.order() {
        if let Some(r) = room_of[dictator] {
            if rooms[r].len() == 3 {
                trace.steps.push(SdStep { dictator, action: SdAction::Skip });
                continue;
            }
        }
        let roommates = |p: PlayerId, room_of: &[Option<usize>], rooms: &[Vec<PlayerId>]| {
            room_of[p].map_or(0, |r| rooms[r].len() - 1)
        };
        let mut choice = None;
        for j in strict_list(inst, dictator) {
            if room_of[dictator].is_some() && room_of[dictator] == room_of[j] {
                choice = Some(j);
                break;
            }
            if roommates(dictator, &room_of, &rooms) + roommates(j, &room_of, &rooms) > 1 {
                continue;
            }
            // With no room left to open, an unassigned dictator may only
            // point at an already assigned player.
            if rooms.len() == k && room_of[dictator].is_none() && room_of[j].is_none() {
                continue;
            }
            choice = Some(j);
            break;
        }
        let j = choice.expect("complete lists always leave an available player");

        let action = match (room_of[dictator], room_of[j]) {
            (Some(r), Some(s)) => {
                debug_assert_eq!(r, s);
                SdAction::NoChange
            }
            (Some(r), None) => {
                rooms[r].push(j);
                room_of[j] = Some(r);
                SdAction::JoinRoom { room: r, mover: j }
            }
            (None, Some(s)) => {
                rooms[s].push(dictator);
                room_of[dictator] = Some(s);
                SdAction::JoinRoom { room: s, mover: dictator }
            }
            (None, None) => {
                let r = rooms.len();
                debug_assert!(r < k);
                rooms.push(vec![dictator, j]);
                room_of[dictator] = Some(r);
                room_of[j] = Some(r);
                SdAction::OpenRoom { room: r, partner: j }
            }
        };
        trace.steps.push(SdStep { dictator, action });
    }

    debug_assert!(rooms.len() == k && rooms.iter().all(|r| r.len() == 3));
    Ok((Assignment::from_rooms(rooms), trace))
}

/// Serial dictatorship for Worst mode with arbitrary capacities.
///
/// Each round the earliest unassigned dictator takes a smallest still-open
/// room (ties broken by room index) together with her best `r - 1`
/// unassigned players; the room is then closed.
pub fn sd_worst(inst: &Instance, order: &DictatorOrder) -> Result<(Assignment, SdTrace), SdError> {
    check_strict_complete(inst)?;
    if inst.mode != ComparisonMode::Worst {
        return Err(SdError::WrongMode { expected: ComparisonMode::Worst, actual: inst.mode });
    }
    if inst.rooms.capacities().iter().any(|&c| c < 2) {
        return Err(SdError::TinyRoom);
    }
    if order.order().len() != inst.n {
        return Err(SdError::BadOrder { n: inst.n });
    }

    let caps = inst.rooms.capacities();
    let mut open: Vec<bool> = vec![true; caps.len()];
    let mut rooms: Vec<Vec<PlayerId>> = vec![Vec::new(); caps.len()];
    let mut assigned = vec![false; inst.n];
    let mut trace = SdTrace::default();

    for &dictator in order.order() {
        if assigned[dictator] {
            trace.steps.push(SdStep { dictator, action: SdAction::Skip });
            continue;
        }
        let room = (0..caps.len())
            .filter(|&r| open[r])
            .min_by_key(|&r| (caps[r], r))
            .expect("capacities sum to n, so a room remains while players do");
        let roommates: Vec<PlayerId> = strict_list(inst, dictator)
            .into_iter()
            .filter(|&j| !assigned[j])
            .take(caps[room] - 1)
            .collect();
        debug_assert_eq!(roommates.len(), caps[room] - 1);
        open[room] = false;
        assigned[dictator] = true;
        rooms[room].push(dictator);
        for &j in &roommates {
            assigned[j] = true;
            rooms[room].push(j);
        }
        trace.steps.push(SdStep { dictator, action: SdAction::TakeRoom { room, roommates } });
    }

    Ok((Assignment::from_rooms(rooms), trace))
}
