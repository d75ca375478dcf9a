//! Executable semantics of a safely administrated token: every
//! privileged capability is announced, time-locked, bounded, and
//! escapable, and transfers can never be disabled. The state machine
//! is deterministic; scenarios drive it and safety checks judge the
//! resulting trace.

pub mod harness;
pub mod safety;
pub mod scenario;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::config::SimParams;
use crate::corpus::manifest::sha256_hex;

pub use harness::{exit_comparison, random_scenario, ExitComparison};
pub use safety::{check_safety, PropertyVerdict, SafetyChecker};
pub use scenario::{parse_scenario, Genesis, Scenario, ScenarioError};

pub type Amount = u128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ActionKind {
    MintToOwner(Amount),
    SetFeeAddress(String),
    AnnounceMigration(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionStatus {
    Pending,
    Executed,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PendingAction {
    pub id: u64,
    pub kind: ActionKind,
    pub proposed_at: u64,
    /// Always proposed_at + delay, exactly.
    pub executable_at: u64,
    pub status: ActionStatus,
}

/// Escrow ledger entry receiving opted-in balances for a migration.
pub fn migration_escrow_key(target: &str) -> String {
    format!("migration:{target}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Migration {
    pub target: String,
    pub opted: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenState {
    pub balances: BTreeMap<String, Amount>,
    pub total_supply: Amount,
    pub owner: String,
    pub pending: Vec<PendingAction>,
    pub params: SimParams,
    pub clock: u64,
    pub minted_this_window: Amount,
    pub window_index: u64,
    /// Mint allowance for the current window, fixed when the window
    /// opened (first applied event inside it).
    pub cap_this_window: Amount,
    pub fee_address: Option<String>,
    /// Scenario-supplied payability facts; unprobed addresses are
    /// assumed payable.
    pub payable_probes: BTreeMap<String, bool>,
    pub migration: Option<Migration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Op {
    Transfer { to: String, amount: Amount },
    ProposeMint { amount: Amount },
    ProposeSetFee { addr: String },
    ProposeMigrate { target: String },
    Execute { action_id: u64 },
    Cancel { action_id: u64 },
    OptIn { target: String },
    BurnSelf { amount: Amount },
    Probe { addr: String, payable: bool },
    Tick,
}

impl Op {
    /// Canonical scenario-line rendering of the operation.
    pub fn render(&self) -> String {
        match self {
            Op::Transfer { to, amount } => format!("transfer {to} {amount}"),
            Op::ProposeMint { amount } => format!("propose mint {amount}"),
            Op::ProposeSetFee { addr } => format!("propose setfee {addr}"),
            Op::ProposeMigrate { target } => format!("propose migrate {target}"),
            Op::Execute { action_id } => format!("execute {action_id}"),
            Op::Cancel { action_id } => format!("cancel {action_id}"),
            Op::OptIn { target } => format!("optin {target}"),
            Op::BurnSelf { amount } => format!("burn {amount}"),
            Op::Probe { addr, payable } => {
                format!("probe {addr} {}", if *payable { "payable" } else { "unpayable" })
            }
            Op::Tick => "tick".to_string(),
        }
    }

    /// Owner-lifecycle operations: the ones a safe administrator must
    /// not be able to hurt bystanders with.
    pub fn is_privileged_lifecycle(&self) -> bool {
        matches!(
            self,
            Op::ProposeMint { .. }
                | Op::ProposeSetFee { .. }
                | Op::ProposeMigrate { .. }
                | Op::Execute { .. }
                | Op::Cancel { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Event {
    pub t: u64,
    pub principal: String,
    pub op: Op,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RejectReason {
    ClockRegression,
    NotOwner,
    InsufficientBalance,
    UnknownAction,
    NotMatured,
    MintCapExceeded,
    FeeAddressNotPayable,
    InvalidState,
    MigrationUnavailable,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::ClockRegression => "ClockRegression",
            RejectReason::NotOwner => "NotOwner",
            RejectReason::InsufficientBalance => "InsufficientBalance",
            RejectReason::UnknownAction => "UnknownAction",
            RejectReason::NotMatured => "NotMatured",
            RejectReason::MintCapExceeded => "MintCapExceeded",
            RejectReason::FeeAddressNotPayable => "FeeAddressNotPayable",
            RejectReason::InvalidState => "InvalidState",
            RejectReason::MigrationUnavailable => "MigrationUnavailable",
        }
    }
}

impl TokenState {
    pub fn genesis(genesis: &Genesis) -> TokenState {
        let mut balances = BTreeMap::new();
        let mut total: Amount = 0;
        for (who, amount) in &genesis.balances {
            *balances.entry(who.clone()).or_insert(0) += amount;
            total += amount;
        }
        TokenState {
            balances,
            total_supply: total,
            owner: genesis.owner.clone(),
            pending: Vec::new(),
            params: genesis.params,
            clock: 0,
            minted_this_window: 0,
            window_index: 0,
            cap_this_window: genesis.params.cap.amount_for(total),
            fee_address: None,
            payable_probes: BTreeMap::new(),
            migration: None,
        }
    }

    pub fn balance(&self, who: &str) -> Amount {
        self.balances.get(who).copied().unwrap_or(0)
    }

    fn probe_result(&self, addr: &str) -> bool {
        self.payable_probes.get(addr).copied().unwrap_or(true)
    }

    /// Window bookkeeping as it would stand at time `t`. The cap is
    /// fixed from total supply when a window first sees an applied
    /// event.
    fn rolled_window(&self, t: u64) -> (u64, Amount, Amount) {
        let index = t.checked_div(self.params.window).unwrap_or(0);
        if index > self.window_index {
            (index, 0, self.params.cap.amount_for(self.total_supply))
        } else {
            (self.window_index, self.minted_this_window, self.cap_this_window)
        }
    }

    /// Commits the passage of time for an applied event: clock moves
    /// to `t` and the mint window rolls if a boundary was crossed.
    fn commit_time(&mut self, t: u64) {
        let (index, minted, cap) = self.rolled_window(t);
        self.window_index = index;
        self.minted_this_window = minted;
        self.cap_this_window = cap;
        self.clock = t;
    }

    fn find_action(&self, id: u64) -> Option<usize> {
        self.pending.iter().position(|a| a.id == id)
    }

    /// Applies one event. On rejection the state is entirely
    /// unchanged, clock included: every check happens before any
    /// mutation.
    pub fn apply(&mut self, event: &Event) -> Result<(), RejectReason> {
        if event.t < self.clock {
            return Err(RejectReason::ClockRegression);
        }
        let t = event.t;
        let caller = event.principal.clone();
        match event.op.clone() {
            Op::Transfer { to, amount } => {
                if self.balance(&caller) < amount {
                    return Err(RejectReason::InsufficientBalance);
                }
                self.commit_time(t);
                if amount > 0 && caller != to {
                    *self.balances.entry(caller).or_insert(0) -= amount;
                    *self.balances.entry(to).or_insert(0) += amount;
                }
                Ok(())
            }
            Op::ProposeMint { amount } => self.propose(ActionKind::MintToOwner(amount), &caller, t),
            Op::ProposeSetFee { addr } => self.propose(ActionKind::SetFeeAddress(addr), &caller, t),
            Op::ProposeMigrate { target } => {
                self.propose(ActionKind::AnnounceMigration(target), &caller, t)
            }
            Op::Execute { action_id } => {
                let idx = self
                    .find_action(action_id)
                    .ok_or(RejectReason::UnknownAction)?;
                if self.pending[idx].status != ActionStatus::Pending {
                    return Err(RejectReason::InvalidState);
                }
                if t < self.pending[idx].executable_at {
                    return Err(RejectReason::NotMatured);
                }
                match self.pending[idx].kind.clone() {
                    ActionKind::MintToOwner(amount) => {
                        let (_, minted, cap) = self.rolled_window(t);
                        if minted + amount > cap {
                            return Err(RejectReason::MintCapExceeded);
                        }
                        self.commit_time(t);
                        self.minted_this_window += amount;
                        self.total_supply += amount;
                        let owner = self.owner.clone();
                        *self.balances.entry(owner).or_insert(0) += amount;
                    }
                    ActionKind::SetFeeAddress(addr) => {
                        if !self.probe_result(&addr) {
                            return Err(RejectReason::FeeAddressNotPayable);
                        }
                        self.commit_time(t);
                        self.fee_address = Some(addr);
                    }
                    ActionKind::AnnounceMigration(target) => {
                        self.commit_time(t);
                        self.migration = Some(Migration {
                            target,
                            opted: BTreeSet::new(),
                        });
                    }
                }
                self.pending[idx].status = ActionStatus::Executed;
                Ok(())
            }
            Op::Cancel { action_id } => {
                if caller != self.owner {
                    return Err(RejectReason::NotOwner);
                }
                let idx = self
                    .find_action(action_id)
                    .ok_or(RejectReason::UnknownAction)?;
                if self.pending[idx].status != ActionStatus::Pending {
                    return Err(RejectReason::InvalidState);
                }
                self.commit_time(t);
                self.pending[idx].status = ActionStatus::Cancelled;
                Ok(())
            }
            Op::OptIn { target } => {
                let matches_announced = self
                    .migration
                    .as_ref()
                    .map(|m| m.target == target)
                    .unwrap_or(false);
                if !matches_announced {
                    return Err(RejectReason::MigrationUnavailable);
                }
                self.commit_time(t);
                let moved = self.balance(&caller);
                if moved > 0 {
                    self.balances.insert(caller.clone(), 0);
                    *self
                        .balances
                        .entry(migration_escrow_key(&target))
                        .or_insert(0) += moved;
                }
                if let Some(migration) = &mut self.migration {
                    migration.opted.insert(caller);
                }
                Ok(())
            }
            Op::BurnSelf { amount } => {
                if self.balance(&caller) < amount {
                    return Err(RejectReason::InsufficientBalance);
                }
                self.commit_time(t);
                if amount > 0 {
                    *self.balances.entry(caller).or_insert(0) -= amount;
                    self.total_supply -= amount;
                }
                Ok(())
            }
            Op::Probe { addr, payable } => {
                self.commit_time(t);
                self.payable_probes.insert(addr, payable);
                Ok(())
            }
            Op::Tick => {
                self.commit_time(t);
                Ok(())
            }
        }
    }

    fn propose(&mut self, kind: ActionKind, caller: &str, t: u64) -> Result<(), RejectReason> {
        if caller != self.owner {
            return Err(RejectReason::NotOwner);
        }
        self.commit_time(t);
        let id = self.pending.len() as u64 + 1;
        self.pending.push(PendingAction {
            id,
            kind,
            proposed_at: t,
            executable_at: t + self.params.delay,
            status: ActionStatus::Pending,
        });
        Ok(())
    }

    /// Canonical JSON used for the trace digest chain. BTreeMap fields
    /// keep key order stable.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub index: usize,
    pub t: u64,
    pub principal: String,
    pub op: String,
    pub outcome: &'static str,
    pub reason: Option<&'static str>,
    /// Chained digest over states: sha256(previous digest || state).
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub genesis_digest: String,
    pub events: Vec<TraceEvent>,
    pub final_state: TokenState,
    pub verdicts: Vec<PropertyVerdict>,
}

/// Runs every event against the state machine, recording applied and
/// rejected transitions, the digest chain, and the safety verdicts.
pub fn run_scenario(scenario: &Scenario) -> Trace {
    let mut state = TokenState::genesis(&scenario.genesis);
    let mut checker = SafetyChecker::new(&state);
    let genesis_digest = sha256_hex(state.canonical_json().as_bytes());
    let mut digest = genesis_digest.clone();
    let mut events = Vec::with_capacity(scenario.events.len());
    for (index, event) in scenario.events.iter().enumerate() {
        let pre = state.clone();
        let outcome = state.apply(event);
        checker.observe(event, &pre, &outcome, &state);
        digest = sha256_hex(format!("{digest}{}", state.canonical_json()).as_bytes());
        events.push(TraceEvent {
            index,
            t: event.t,
            principal: event.principal.clone(),
            op: event.op.render(),
            outcome: if outcome.is_ok() { "applied" } else { "rejected" },
            reason: outcome.err().map(|r| r.as_str()),
            digest: digest.clone(),
        });
    }
    Trace {
        genesis_digest,
        events,
        final_state: state,
        verdicts: checker.verdicts(),
    }
}
