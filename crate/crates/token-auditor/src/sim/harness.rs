//! Scenario generation for property testing. `random_scenario` builds
//! adversarial-leaning scripts from a seed (overdrafts, premature
//! executes, bogus ids, clock regressions, non-owner proposals), and
//! `exit_comparison` replays the canonical exit-before-execute story
//! in two runs to show the exiting holder's funds are identical with
//! and without the pending action landing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CapPolicy, SimParams};

use super::{run_scenario, Amount, Event, Genesis, Op, Scenario};

const USERS: [&str; 4] = ["alice", "bob", "carol", "mallory"];
const FEE_ADDRS: [&str; 3] = ["treasury", "drain", "sink"];
const TARGETS: [&str; 2] = ["vault", "v2"];

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

/// Any principal that can appear as an actor or transfer target.
fn any_principal(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..6) {
        0 => "admin".to_string(),
        5 => "exit".to_string(),
        i => USERS[i - 1].to_string(),
    }
}

/// Deterministic scenario from a seed: same seed, same script.
pub fn random_scenario(seed: u64, max_events: usize) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delay = rng.gen_range(1_000..100_000);
    let params = SimParams {
        delay,
        window: rng.gen_range(10_000..1_000_000),
        cap: if rng.gen_bool(0.5) {
            CapPolicy::Absolute(rng.gen_range(1..100_000))
        } else {
            CapPolicy::PercentOfSupply(rng.gen_range(1..=100))
        },
    };
    let mut balances = vec![(
        "admin".to_string(),
        rng.gen_range(100_000u64..1_000_000) as Amount,
    )];
    for user in USERS {
        balances.push((user.to_string(), rng.gen_range(0u64..500_000) as Amount));
    }
    let genesis = Genesis {
        owner: "admin".to_string(),
        params,
        balances,
    };

    let count = rng.gen_range(1..=max_events.max(1));
    let mut events = Vec::with_capacity(count);
    let mut clock: u64 = 0;
    let mut proposals: u64 = 0;
    for _ in 0..count {
        let roll = rng.gen_range(0..100u32);
        let t = if roll < 85 || clock == 0 {
            clock += rng.gen_range(0..=delay / 2);
            clock
        } else if roll < 95 {
            clock
        } else {
            // Deliberate regression; the machine must refuse it.
            clock - rng.gen_range(1..=clock.min(500)).max(1)
        };
        let owner_or_rogue = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.7) {
                "admin".to_string()
            } else {
                pick(rng, &USERS).to_string()
            }
        };
        let (principal, op) = match rng.gen_range(0..100u32) {
            0..=29 => (
                any_principal(&mut rng),
                Op::Transfer {
                    to: any_principal(&mut rng),
                    amount: rng.gen_range(0u64..600_000) as Amount,
                },
            ),
            30..=44 => {
                proposals += 1;
                let op = match rng.gen_range(0..3u32) {
                    0 => Op::ProposeMint {
                        amount: rng.gen_range(0u64..50_000) as Amount,
                    },
                    1 => Op::ProposeSetFee {
                        addr: pick(&mut rng, &FEE_ADDRS).to_string(),
                    },
                    _ => Op::ProposeMigrate {
                        target: pick(&mut rng, &TARGETS).to_string(),
                    },
                };
                (owner_or_rogue(&mut rng), op)
            }
            45..=64 => (
                any_principal(&mut rng),
                Op::Execute {
                    action_id: rng.gen_range(1..=proposals + 2),
                },
            ),
            65..=74 => (
                owner_or_rogue(&mut rng),
                Op::Cancel {
                    action_id: rng.gen_range(1..=proposals + 2),
                },
            ),
            75..=79 => (
                any_principal(&mut rng),
                Op::OptIn {
                    target: pick(&mut rng, &TARGETS).to_string(),
                },
            ),
            80..=89 => (
                any_principal(&mut rng),
                Op::BurnSelf {
                    amount: rng.gen_range(0u64..300_000) as Amount,
                },
            ),
            90..=96 => (
                any_principal(&mut rng),
                Op::Probe {
                    addr: pick(&mut rng, &FEE_ADDRS).to_string(),
                    payable: rng.gen_bool(0.5),
                },
            ),
            _ => (any_principal(&mut rng), Op::Tick),
        };
        events.push(Event { t, principal, op });
    }
    Scenario { genesis, events }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitComparison {
    pub exit_balance_with_execute: Amount,
    pub exit_balance_without_execute: Amount,
    pub pre_proposal_balance: Amount,
}

/// Canonical exit story: a mint is proposed, alice moves her entire
/// balance to a fresh address one tick before maturity, and the
/// action executes on schedule. Replays the script with and without
/// the final execute; the exit address must hold the same amount
/// either way, and it must equal alice's pre-proposal balance.
pub fn exit_comparison(delay: u64) -> ExitComparison {
    let pre_proposal_balance: Amount = 400_000;
    let genesis = Genesis {
        owner: "admin".to_string(),
        params: SimParams {
            delay,
            window: 2_592_000,
            cap: CapPolicy::PercentOfSupply(1),
        },
        balances: vec![
            ("admin".to_string(), 600_000),
            ("alice".to_string(), pre_proposal_balance),
        ],
    };
    let events = vec![
        Event {
            t: 0,
            principal: "admin".to_string(),
            op: Op::ProposeMint { amount: 100 },
        },
        Event {
            t: delay.saturating_sub(1),
            principal: "alice".to_string(),
            op: Op::Transfer {
                to: "exit".to_string(),
                amount: pre_proposal_balance,
            },
        },
        Event {
            t: delay,
            principal: "admin".to_string(),
            op: Op::Execute { action_id: 1 },
        },
    ];
    let full = Scenario {
        genesis: genesis.clone(),
        events: events.clone(),
    };
    let truncated = Scenario {
        genesis,
        events: events[..events.len() - 1].to_vec(),
    };
    let with_execute = run_scenario(&full);
    let without_execute = run_scenario(&truncated);
    ExitComparison {
        exit_balance_with_execute: with_execute.final_state.balance("exit"),
        exit_balance_without_execute: without_execute.final_state.balance("exit"),
        pre_proposal_balance,
    }
}
