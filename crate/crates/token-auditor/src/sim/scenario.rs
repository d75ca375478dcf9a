//! Line-oriented scenario files: `@` directives configure genesis,
//! then one event per line as `t=<time> <principal> <op> [args]`.
//! `#` starts a comment; blank lines are ignored. Directives must all
//! precede the first event.

use serde::Serialize;
use thiserror::Error;

use crate::config::{CapPolicy, SimParams};

use super::{Amount, Event, Op};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Genesis {
    pub owner: String,
    pub params: SimParams,
    pub balances: Vec<(String, Amount)>,
}

impl Default for Genesis {
    fn default() -> Self {
        Genesis {
            owner: "owner".to_string(),
            params: SimParams::default(),
            balances: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub genesis: Genesis,
    pub events: Vec<Event>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut genesis = Genesis::default();
    let mut events = Vec::new();
    let mut seen = DirectiveSeen::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(directive) = line.strip_prefix('@') {
            if !events.is_empty() {
                return Err(err(line_no, "directive after first event"));
            }
            parse_directive(directive, line_no, &mut genesis, &mut seen)?;
        } else if line.starts_with("t=") {
            events.push(parse_event(line, line_no)?);
        } else {
            return Err(err(
                line_no,
                format!("expected a directive or an event, found {line:?}"),
            ));
        }
    }
    Ok(Scenario { genesis, events })
}

#[derive(Default)]
struct DirectiveSeen {
    owner: bool,
    delay: bool,
    window: bool,
    cap: bool,
}

fn parse_directive(
    directive: &str,
    line_no: usize,
    genesis: &mut Genesis,
    seen: &mut DirectiveSeen,
) -> Result<(), ScenarioError> {
    let mut parts = directive.split_whitespace();
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let once = |flag: &mut bool| -> Result<(), ScenarioError> {
        if *flag {
            return Err(err(line_no, format!("duplicate @{name} directive")));
        }
        *flag = true;
        Ok(())
    };
    match name {
        "owner" => {
            once(&mut seen.owner)?;
            let [who] = args[..] else {
                return Err(err(line_no, "@owner takes one name"));
            };
            genesis.owner = who.to_string();
        }
        "delay" => {
            once(&mut seen.delay)?;
            let [value] = args[..] else {
                return Err(err(line_no, "@delay takes one number"));
            };
            let delay = parse_u64(value, line_no, "delay")?;
            if delay == 0 {
                return Err(err(line_no, "delay must be positive"));
            }
            genesis.params.delay = delay;
        }
        "window" => {
            once(&mut seen.window)?;
            let [value] = args[..] else {
                return Err(err(line_no, "@window takes one number"));
            };
            let window = parse_u64(value, line_no, "window")?;
            if window == 0 {
                return Err(err(line_no, "window must be positive"));
            }
            genesis.params.window = window;
        }
        "cap" => {
            once(&mut seen.cap)?;
            let [value] = args[..] else {
                return Err(err(line_no, "@cap takes one amount or percentage"));
            };
            genesis.params.cap = CapPolicy::parse(value)
                .map_err(|reason| err(line_no, format!("bad cap {value:?}: {reason}")))?;
        }
        "balance" => {
            let [who, value] = args[..] else {
                return Err(err(line_no, "@balance takes a name and an amount"));
            };
            if genesis.balances.iter().any(|(name, _)| name == who) {
                return Err(err(line_no, format!("duplicate @balance for {who}")));
            }
            let amount = parse_amount(value, line_no)?;
            genesis.balances.push((who.to_string(), amount));
        }
        other => return Err(err(line_no, format!("unknown directive @{other}"))),
    }
    Ok(())
}

fn parse_event(line: &str, line_no: usize) -> Result<Event, ScenarioError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let time_token = tokens[0]
        .strip_prefix("t=")
        .expect("caller checked the prefix");
    let t = parse_u64(time_token, line_no, "time")?;
    let Some(&principal) = tokens.get(1) else {
        return Err(err(line_no, "event is missing a principal"));
    };
    let Some(&op_word) = tokens.get(2) else {
        return Err(err(line_no, "event is missing an operation"));
    };
    let args = &tokens[3..];
    let arity = |n: usize, usage: &str| -> Result<(), ScenarioError> {
        if args.len() != n {
            return Err(err(line_no, format!("usage: {usage}")));
        }
        Ok(())
    };
    let op = match op_word {
        "transfer" => {
            arity(2, "transfer <to> <amount>")?;
            Op::Transfer {
                to: args[0].to_string(),
                amount: parse_amount(args[1], line_no)?,
            }
        }
        "propose" => match args.first().copied() {
            Some("mint") => {
                arity(2, "propose mint <amount>")?;
                Op::ProposeMint {
                    amount: parse_amount(args[1], line_no)?,
                }
            }
            Some("setfee") => {
                arity(2, "propose setfee <addr>")?;
                Op::ProposeSetFee {
                    addr: args[1].to_string(),
                }
            }
            Some("migrate") => {
                arity(2, "propose migrate <target>")?;
                Op::ProposeMigrate {
                    target: args[1].to_string(),
                }
            }
            other => {
                return Err(err(
                    line_no,
                    format!(
                        "propose expects mint, setfee, or migrate, found {}",
                        other.unwrap_or("nothing")
                    ),
                ))
            }
        },
        "execute" => {
            arity(1, "execute <action-id>")?;
            Op::Execute {
                action_id: parse_u64(args[0], line_no, "action id")?,
            }
        }
        "cancel" => {
            arity(1, "cancel <action-id>")?;
            Op::Cancel {
                action_id: parse_u64(args[0], line_no, "action id")?,
            }
        }
        "optin" => {
            arity(1, "optin <target>")?;
            Op::OptIn {
                target: args[0].to_string(),
            }
        }
        "burn" => {
            arity(1, "burn <amount>")?;
            Op::BurnSelf {
                amount: parse_amount(args[0], line_no)?,
            }
        }
        "probe" => {
            arity(2, "probe <addr> payable|unpayable")?;
            let payable = match args[1] {
                "payable" => true,
                "unpayable" => false,
                other => {
                    return Err(err(
                        line_no,
                        format!("probe verdict must be payable or unpayable, found {other:?}"),
                    ))
                }
            };
            Op::Probe {
                addr: args[0].to_string(),
                payable,
            }
        }
        "tick" => {
            arity(0, "tick")?;
            Op::Tick
        }
        other => return Err(err(line_no, format!("unknown operation {other:?}"))),
    };
    Ok(Event {
        t,
        principal: principal.to_string(),
        op,
    })
}

fn parse_u64(text: &str, line_no: usize, what: &str) -> Result<u64, ScenarioError> {
    text.parse::<u64>()
        .map_err(|_| err(line_no, format!("bad {what} {text:?}")))
}

fn parse_amount(text: &str, line_no: usize) -> Result<Amount, ScenarioError> {
    text.parse::<Amount>()
        .map_err(|_| err(line_no, format!("bad amount {text:?}")))
}
