//! Trace-level safety judgments. Four properties are checked on every
//! run:
//!
//! P1  timelock: an applied execute never lands before its action's
//!     maturity time, and maturity is exactly the proposal time plus
//!     the configured delay.
//! P2  exit safety: applied privileged lifecycle events (propose,
//!     execute, cancel) never reduce any balance and never change a
//!     non-owner balance, so a holder who exits before execution
//!     keeps exactly what they moved.
//! P3  conservation: after every applied event the balance sum equals
//!     total supply, and supply moves only by executed mints (up) and
//!     self-burns (down).
//! P4  transfer availability: a transfer is only ever rejected for
//!     insufficient balance or clock regression; no administrative
//!     state can pause it.

use serde::Serialize;

use super::{
    ActionKind, Amount, Event, Op, RejectReason, Scenario, TokenState,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub pass: bool,
    pub detail: String,
}

pub struct SafetyChecker {
    owner: String,
    delay: u64,
    index: usize,
    applied: usize,
    executes: usize,
    privileged: usize,
    transfers_rejected: usize,
    violations: [Vec<String>; 4],
}

impl SafetyChecker {
    pub fn new(genesis_state: &TokenState) -> SafetyChecker {
        SafetyChecker {
            owner: genesis_state.owner.clone(),
            delay: genesis_state.params.delay,
            index: 0,
            applied: 0,
            executes: 0,
            privileged: 0,
            transfers_rejected: 0,
            violations: Default::default(),
        }
    }

    fn violate(&mut self, property: usize, message: String) {
        self.violations[property - 1].push(message);
    }

    pub fn observe(
        &mut self,
        event: &Event,
        pre: &TokenState,
        outcome: &Result<(), RejectReason>,
        post: &TokenState,
    ) {
        let i = self.index;
        self.index += 1;
        match outcome {
            Ok(()) => {
                self.applied += 1;
                self.check_conservation(i, event, pre, post);
                if let Op::Execute { action_id } = &event.op {
                    self.executes += 1;
                    self.check_timelock(i, event.t, *action_id, post);
                }
                if event.op.is_privileged_lifecycle() {
                    self.privileged += 1;
                    self.check_bystanders(i, event, pre, post);
                }
            }
            Err(reason) => {
                if matches!(event.op, Op::Transfer { .. }) {
                    self.transfers_rejected += 1;
                    if !matches!(
                        reason,
                        RejectReason::InsufficientBalance | RejectReason::ClockRegression
                    ) {
                        self.violate(
                            4,
                            format!(
                                "event {i}: transfer rejected with {}, which only an \
                                 administrative pause could explain",
                                reason.as_str()
                            ),
                        );
                    }
                }
            }
        }
    }

    fn check_timelock(&mut self, i: usize, t: u64, action_id: u64, post: &TokenState) {
        let Some(action) = post.pending.iter().find(|a| a.id == action_id) else {
            self.violate(1, format!("event {i}: applied execute of unknown action {action_id}"));
            return;
        };
        if t < action.executable_at {
            self.violate(
                1,
                format!(
                    "event {i}: action {action_id} executed at t={t}, before maturity {}",
                    action.executable_at
                ),
            );
        }
        if action.executable_at.saturating_sub(action.proposed_at) != self.delay {
            self.violate(
                1,
                format!(
                    "event {i}: action {action_id} matured {} after proposal, expected {}",
                    action.executable_at.saturating_sub(action.proposed_at),
                    self.delay
                ),
            );
        }
    }

    fn check_bystanders(&mut self, i: usize, event: &Event, pre: &TokenState, post: &TokenState) {
        for (who, before) in &pre.balances {
            let after = post.balance(who);
            if after < *before {
                self.violate(
                    2,
                    format!(
                        "event {i}: {} reduced the balance of {who} from {before} to {after}",
                        event.op.render()
                    ),
                );
            } else if who != &self.owner && after != *before {
                self.violate(
                    2,
                    format!(
                        "event {i}: {} changed the non-owner balance of {who}",
                        event.op.render()
                    ),
                );
            }
        }
        for (who, after) in &post.balances {
            if who != &self.owner && *after > 0 && !pre.balances.contains_key(who) {
                self.violate(
                    2,
                    format!(
                        "event {i}: {} credited {who}, who held nothing before",
                        event.op.render()
                    ),
                );
            }
        }
    }

    fn check_conservation(&mut self, i: usize, event: &Event, pre: &TokenState, post: &TokenState) {
        let sum: Amount = post.balances.values().copied().sum();
        if sum != post.total_supply {
            self.violate(
                3,
                format!(
                    "event {i}: balances sum to {sum} but total supply is {}",
                    post.total_supply
                ),
            );
        }
        let expected = match &event.op {
            Op::BurnSelf { amount } => pre.total_supply - amount,
            Op::Execute { action_id } => {
                let minted = post
                    .pending
                    .iter()
                    .find(|a| a.id == *action_id)
                    .and_then(|a| match &a.kind {
                        ActionKind::MintToOwner(amount) => Some(*amount),
                        _ => None,
                    })
                    .unwrap_or(0);
                pre.total_supply + minted
            }
            _ => pre.total_supply,
        };
        if post.total_supply != expected {
            self.violate(
                3,
                format!(
                    "event {i}: {} moved total supply from {} to {}, expected {expected}",
                    event.op.render(),
                    pre.total_supply,
                    post.total_supply
                ),
            );
        }
    }

    pub fn verdicts(&self) -> Vec<PropertyVerdict> {
        let passes = [
            format!(
                "{} applied execute(s), none before maturity, delay exact",
                self.executes
            ),
            format!(
                "{} privileged action(s) left bystander balances untouched",
                self.privileged
            ),
            format!(
                "balance sum matched total supply after each of {} applied event(s)",
                self.applied
            ),
            format!(
                "{} rejected transfer(s), all for insufficient balance or clock regression",
                self.transfers_rejected
            ),
        ];
        (1..=4)
            .map(|p| {
                let found = &self.violations[p - 1];
                PropertyVerdict {
                    property: format!("P{p}"),
                    pass: found.is_empty(),
                    detail: if found.is_empty() {
                        passes[p - 1].clone()
                    } else {
                        format!("{} violation(s); first: {}", found.len(), found[0])
                    },
                }
            })
            .collect()
    }
}

/// Runs the scenario and returns only the property verdicts.
pub fn check_safety(scenario: &Scenario) -> Vec<PropertyVerdict> {
    super::run_scenario(scenario).verdicts
}
