//! Domain types: instances, preference profiles, assignments, coalition
//! values, and the Pareto dominance relation.

use std::fmt;

use thiserror::Error;

/// Players are dense indices `0..n`.
pub type PlayerId = usize;

/// A player's ordinal rank of another player. Lower is better; rank 1 is the
/// top choice. Ranks are always kept dense: for each player the defined ranks
/// form `{1, ..., m}`.
pub type Rank = u32;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("rank_of(i, i) is undefined (player {0})")]
    SelfRank(PlayerId),
    #[error("player {0} is not a member of the coalition")]
    NotAMember(PlayerId),
    #[error("assignment is not a partition of the player set: {0}")]
    NotAPartition(String),
    #[error("assignment is not feasible")]
    InfeasibleAssignment,
}

/// How a player values a room: by her best or her worst roommate in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComparisonMode {
    Best,
    Worst,
}

impl fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonMode::Best => write!(f, "best"),
            ComparisonMode::Worst => write!(f, "worst"),
        }
    }
}

/// The ordered list of room capacities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoomSpec {
    capacities: Vec<usize>,
}

impl RoomSpec {
    pub fn new(capacities: Vec<usize>) -> Self {
        RoomSpec { capacities }
    }

    pub fn uniform(rooms: usize, capacity: usize) -> Self {
        RoomSpec { capacities: vec![capacity; rooms] }
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn len(&self) -> usize {
        self.capacities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.capacities.is_empty()
    }

    pub fn total(&self) -> usize {
        self.capacities.iter().sum()
    }
}

/// Per-player ordinal preferences over the other players.
///
/// `rank[i][j]` is the normalized rank of `j` on `i`'s list, or `None` when
/// `j` is unacceptable to `i`. The `strict` and `complete` flags describe the
/// intended shape; [`validate_instance`] checks that the data agrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    rank: Vec<Vec<Option<Rank>>>,
    strict: bool,
    complete: bool,
}

impl PreferenceProfile {
    /// Builds a profile from tie-group lists: `groups[i]` lists the players
    /// acceptable to `i`, best group first. Every member of group `g` gets
    /// rank `g + 1`, so ranks come out dense by construction.
    pub fn from_groups(n: usize, groups: &[Vec<Vec<PlayerId>>], strict: bool) -> Self {
        let mut rank = vec![vec![None; n]; n];
        let mut complete = true;
        for (i, list) in groups.iter().enumerate() {
            for (g, group) in list.iter().enumerate() {
                for &j in group {
                    rank[i][j] = Some(g as Rank + 1);
                }
            }
            let defined = rank[i].iter().filter(|r| r.is_some()).count();
            if defined < n - 1 {
                complete = false;
            }
        }
        PreferenceProfile { n, rank, strict, complete }
    }

    /// Builds a strict profile from plain ordered lists.
    pub fn from_strict_lists(n: usize, lists: &[Vec<PlayerId>]) -> Self {
        let groups: Vec<Vec<Vec<PlayerId>>> = lists
            .iter()
            .map(|l| l.iter().map(|&j| vec![j]).collect())
            .collect();
        Self::from_groups(n, &groups, true)
    }

    /// Builds a profile directly from a rank matrix, without normalization.
    /// Intended for tests that need deliberately malformed data.
    pub fn from_rank_matrix(rank: Vec<Vec<Option<Rank>>>, strict: bool, complete: bool) -> Self {
        let n = rank.len();
        PreferenceProfile { n, rank, strict, complete }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rank(&self, i: PlayerId, j: PlayerId) -> Option<Rank> {
        self.rank[i][j]
    }

    /// Reconstructs `i`'s list as tie groups, best group first.
    pub fn groups_of(&self, i: PlayerId) -> Vec<Vec<PlayerId>> {
        let max = self.rank[i].iter().flatten().copied().max().unwrap_or(0);
        let mut out = vec![Vec::new(); max as usize];
        for j in 0..self.n {
            if let Some(r) = self.rank[i][j] {
                out[r as usize - 1].push(j);
            }
        }
        out.retain(|g| !g.is_empty());
        out
    }
}

/// An instance of the room assignment problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub rooms: RoomSpec,
    pub mode: ComparisonMode,
    pub prefs: PreferenceProfile,
}

impl Instance {
    /// Relabels players by `perm` (`perm[old] = new`). Preferences, room
    /// capacities and mode carry over.
    pub fn relabel(&self, perm: &[PlayerId]) -> Instance {
        let n = self.n;
        let mut rank = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(r) = self.prefs.rank(i, j) {
                    rank[perm[i]][perm[j]] = Some(r);
                }
            }
        }
        Instance {
            n,
            rooms: self.rooms.clone(),
            mode: self.mode,
            prefs: PreferenceProfile::from_rank_matrix(
                rank,
                self.prefs.is_strict(),
                self.prefs.is_complete(),
            ),
        }
    }
}

/// A set of at least two players sharing a room. Members are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition {
    members: Vec<PlayerId>,
}

impl Coalition {
    pub fn new(mut members: Vec<PlayerId>) -> Self {
        members.sort_unstable();
        members.dedup();
        Coalition { members }
    }

    pub fn members(&self) -> &[PlayerId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: PlayerId) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn min_member(&self) -> PlayerId {
        self.members[0]
    }
}

/// A partition of the players into rooms, aligned index-wise with the
/// instance's [`RoomSpec`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    rooms: Vec<Coalition>,
}

impl Assignment {
    pub fn new(rooms: Vec<Coalition>) -> Self {
        Assignment { rooms }
    }

    pub fn from_rooms(rooms: Vec<Vec<PlayerId>>) -> Self {
        Assignment { rooms: rooms.into_iter().map(Coalition::new).collect() }
    }

    pub fn rooms(&self) -> &[Coalition] {
        &self.rooms
    }

    /// Index of the room containing `i`, if any.
    pub fn room_of(&self, i: PlayerId) -> Option<usize> {
        self.rooms.iter().position(|c| c.contains(i))
    }

    /// Canonical form: within each maximal run of equal capacities in `spec`,
    /// rooms are ordered by their smallest member. Rooms themselves stay
    /// aligned with the capacity list, so equal-capacity permutations of the
    /// same partition compare equal after canonicalization.
    pub fn canonicalize(&self, spec: &RoomSpec) -> Assignment {
        let caps = spec.capacities();
        let mut rooms = self.rooms.clone();
        let mut start = 0;
        while start < rooms.len() {
            let mut end = start + 1;
            while end < rooms.len() && caps.get(end) == caps.get(start) {
                end += 1;
            }
            rooms[start..end].sort_by_key(|c| c.min_member());
            start = end;
        }
        Assignment { rooms }
    }

    /// True iff the rooms contain every player in `0..n` exactly once.
    pub fn is_partition(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for room in &self.rooms {
            for &p in room.members() {
                if p >= n || seen[p] {
                    return false;
                }
                seen[p] = true;
            }
        }
        seen.iter().all(|&s| s)
    }

    fn partition_error(&self, n: usize) -> Option<String> {
        let mut seen = vec![false; n];
        for room in &self.rooms {
            for &p in room.members() {
                if p >= n {
                    return Some(format!("player {p} out of range 0..{n}"));
                }
                if seen[p] {
                    return Some(format!("player {p} appears twice"));
                }
                seen[p] = true;
            }
        }
        seen.iter()
            .position(|&s| !s)
            .map(|p| format!("player {p} is missing"))
    }
}

/// A player's valuation of her room.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoalitionValue {
    /// Rank of the best (Best mode) or worst (Worst mode) roommate.
    Rank(Rank),
    /// Some roommate is unacceptable; no feasible assignment puts the player here.
    Infeasible,
}

/// A validation report: empty `violations` means the instance is well formed.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of an instance. Violations are reported
/// as data; nothing here is a hard failure.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = inst.n;

    for (idx, &cap) in inst.rooms.capacities().iter().enumerate() {
        if cap < 2 {
            report
                .violations
                .push(format!("room {idx} has capacity {cap} < 2"));
        }
    }
    let total = inst.rooms.total();
    if total != n {
        report
            .violations
            .push(format!("capacity sum {total} \u{2260} {n}"));
    }

    if inst.prefs.n() != n {
        report.violations.push(format!(
            "preference profile covers {} players, instance has {n}",
            inst.prefs.n()
        ));
        return report;
    }

    for i in 0..n {
        if inst.prefs.rank(i, i).is_some() {
            report
                .violations
                .push(format!("player {i} ranks herself"));
        }
        let mut defined: Vec<Rank> = (0..n)
            .filter(|&j| j != i)
            .filter_map(|j| inst.prefs.rank(i, j))
            .collect();
        if inst.prefs.is_complete() && defined.len() < n - 1 {
            report.violations.push(format!(
                "profile flagged complete but player {i} ranks only {} of {} others",
                defined.len(),
                n - 1
            ));
        }
        if !inst.prefs.is_complete() && inst.prefs.is_strict() {
            // nothing extra: incompleteness is allowed under strict
        }
        defined.sort_unstable();
        if inst.prefs.is_strict() {
            if let Some(w) = defined.windows(2).find(|w| w[0] == w[1]) {
                report.violations.push(format!(
                    "duplicate rank {} on player {i}'s list under strict",
                    w[0]
                ));
            }
        }
        // Dense prefix {1, ..., m}: every value attained, starting at 1.
        let mut uniq = defined.clone();
        uniq.dedup();
        for (k, &r) in uniq.iter().enumerate() {
            if r != k as Rank + 1 {
                report.violations.push(format!(
                    "player {i}'s ranks are not a dense prefix (expected {}, found {r})",
                    k + 1
                ));
                break;
            }
        }
    }
    report
}

/// The normalized rank of `j` on `i`'s list, or `None` when unacceptable.
pub fn rank_of(inst: &Instance, i: PlayerId, j: PlayerId) -> Result<Option<Rank>, ModelError> {
    if i == j {
        return Err(ModelError::SelfRank(i));
    }
    Ok(inst.prefs.rank(i, j))
}

/// How player `i` values coalition `c`: `Infeasible` if any roommate is
/// unacceptable, otherwise the rank of her best (Best mode) or worst (Worst
/// mode) roommate.
pub fn coalition_value(
    inst: &Instance,
    i: PlayerId,
    c: &Coalition,
) -> Result<CoalitionValue, ModelError> {
    if !c.contains(i) {
        return Err(ModelError::NotAMember(i));
    }
    Ok(room_value(inst, i, c.members()))
}

/// Infallible valuation used by the search code; assumes `i` is a member.
pub(crate) fn room_value(inst: &Instance, i: PlayerId, members: &[PlayerId]) -> CoalitionValue {
    let mut best: Option<Rank> = None;
    let mut worst: Option<Rank> = None;
    for &j in members {
        if j == i {
            continue;
        }
        match inst.prefs.rank(i, j) {
            None => return CoalitionValue::Infeasible,
            Some(r) => {
                best = Some(best.map_or(r, |b| b.min(r)));
                worst = Some(worst.map_or(r, |w| w.max(r)));
            }
        }
    }
    let picked = match inst.mode {
        ComparisonMode::Best => best,
        ComparisonMode::Worst => worst,
    };
    match picked {
        Some(r) => CoalitionValue::Rank(r),
        None => CoalitionValue::Infeasible, // singleton rooms never arise in valid instances
    }
}

/// Each player's valuation of her own room. Errors if `a` is not a partition.
pub fn value_profile(inst: &Instance, a: &Assignment) -> Result<Vec<CoalitionValue>, ModelError> {
    if let Some(msg) = a.partition_error(inst.n) {
        return Err(ModelError::NotAPartition(msg));
    }
    let mut values = vec![CoalitionValue::Infeasible; inst.n];
    for room in a.rooms() {
        for &i in room.members() {
            values[i] = room_value(inst, i, room.members());
        }
    }
    Ok(values)
}

/// Feasibility per the problem definition: rooms hit their capacities exactly
/// and every member declares every roommate acceptable.
pub fn is_feasible(inst: &Instance, a: &Assignment) -> Result<bool, ModelError> {
    if let Some(msg) = a.partition_error(inst.n) {
        return Err(ModelError::NotAPartition(msg));
    }
    let caps = inst.rooms.capacities();
    if a.rooms().len() != caps.len() {
        return Ok(false);
    }
    for (room, &cap) in a.rooms().iter().zip(caps) {
        if room.len() != cap {
            return Ok(false);
        }
        for &i in room.members() {
            for &j in room.members() {
                if i != j && inst.prefs.rank(i, j).is_none() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pareto dominance: `a2` dominates `a1` iff no player is worse off under
/// `a2` and at least one is strictly better off. Both assignments must be
/// feasible.
pub fn dominates(inst: &Instance, a2: &Assignment, a1: &Assignment) -> Result<bool, ModelError> {
    if !is_feasible(inst, a1)? || !is_feasible(inst, a2)? {
        return Err(ModelError::InfeasibleAssignment);
    }
    let v1 = value_profile(inst, a1)?;
    let v2 = value_profile(inst, a2)?;
    Ok(dominates_values(&v2, &v1))
}

/// Dominance on precomputed value vectors (ranks only; feasible assignments
/// never produce `Infeasible` entries).
pub(crate) fn dominates_values(v2: &[CoalitionValue], v1: &[CoalitionValue]) -> bool {
    let mut strict = false;
    for (a, b) in v2.iter().zip(v1) {
        let (CoalitionValue::Rank(r2), CoalitionValue::Rank(r1)) = (a, b) else {
            return false;
        };
        if r2 > r1 {
            return false;
        }
        if r2 < r1 {
            strict = true;
        }
    }
    strict
}
