//! Row-command sequences and their line-oriented text form.
//!
//! ```text
//! INITC 509 0
//! COPY 0 503
//! COPY 1 504
//! COPY 509 505
//! TRA 503 504 505
//! COPY 503 2
//! ```

use std::fmt;
use std::str::FromStr;

use super::error::{PumError, Result};
use super::subarray::{ActivationLog, SubarrayState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    /// Activate-activate-precharge copy of `src` into `dst`.
    CopyRow { src: usize, dst: usize },
    TripleActivate(usize, usize, usize),
    NotActivate { src: usize, dst: usize },
    InitConstant { row: usize, value: bool },
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Command::CopyRow { src, dst } => write!(f, "COPY {src} {dst}"),
            Command::TripleActivate(a, b, c) => write!(f, "TRA {a} {b} {c}"),
            Command::NotActivate { src, dst } => write!(f, "NOT {src} {dst}"),
            Command::InitConstant { row, value } => write!(f, "INITC {row} {}", value as u8),
        }
    }
}

/// Per-kind command totals of a program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CommandCounts {
    pub copies: u64,
    pub triple_activations: u64,
    pub not_activations: u64,
    pub constant_inits: u64,
}

impl CommandCounts {
    pub fn total(&self) -> u64 {
        self.copies + self.triple_activations + self.not_activations + self.constant_inits
    }
}

impl From<ActivationLog> for CommandCounts {
    fn from(log: ActivationLog) -> Self {
        Self {
            copies: log.copies,
            triple_activations: log.triple_activations,
            not_activations: log.not_activations,
            constant_inits: log.constant_inits,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MicroProgram {
    commands: Vec<Command>,
}

impl MicroProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_commands(commands: Vec<Command>) -> Self {
        Self { commands }
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn push(&mut self, command: Command) {
        self.commands.push(command);
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn counts(&self) -> CommandCounts {
        let mut counts = CommandCounts::default();
        for c in &self.commands {
            match c {
                Command::CopyRow { .. } => counts.copies += 1,
                Command::TripleActivate(..) => counts.triple_activations += 1,
                Command::NotActivate { .. } => counts.not_activations += 1,
                Command::InitConstant { .. } => counts.constant_inits += 1,
            }
        }
        counts
    }

    /// Append `other`, moving its constant initialisations to the front of
    /// `self` so every constant is set once at program start.
    pub fn append(&mut self, other: &MicroProgram) {
        for cmd in &other.commands {
            match cmd {
                Command::InitConstant { .. } => {
                    let prefix = self
                        .commands
                        .iter()
                        .take_while(|c| matches!(c, Command::InitConstant { .. }))
                        .count();
                    if !self.commands[..prefix].contains(cmd) {
                        self.commands.insert(prefix, *cmd);
                    }
                }
                _ => self.commands.push(*cmd),
            }
        }
    }
}

impl fmt::Display for MicroProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for MicroProgram {
    type Err = PumError;

    fn from_str(s: &str) -> Result<Self> {
        let mut commands = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| PumError::Parse {
                line: idx + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let op = fields.next().unwrap_or_default();
            let args: Vec<usize> = fields
                .map(|t| t.parse::<usize>().map_err(|e| err(format!("`{t}`: {e}"))))
                .collect::<Result<_>>()?;
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("{op} takes {n} arguments, got {}", args.len())))
                }
            };
            let cmd = match op {
                "COPY" => {
                    arity(2)?;
                    Command::CopyRow {
                        src: args[0],
                        dst: args[1],
                    }
                }
                "TRA" => {
                    arity(3)?;
                    Command::TripleActivate(args[0], args[1], args[2])
                }
                "NOT" => {
                    arity(2)?;
                    Command::NotActivate {
                        src: args[0],
                        dst: args[1],
                    }
                }
                "INITC" => {
                    arity(2)?;
                    if args[1] > 1 {
                        return Err(err(format!("constant value must be 0 or 1, got {}", args[1])));
                    }
                    Command::InitConstant {
                        row: args[0],
                        value: args[1] == 1,
                    }
                }
                other => return Err(err(format!("unknown command `{other}`"))),
            };
            commands.push(cmd);
        }
        Ok(Self { commands })
    }
}

pub fn apply_command(state: &mut SubarrayState, command: &Command) -> Result<()> {
    match *command {
        Command::CopyRow { src, dst } => state.copy_row(src, dst),
        Command::TripleActivate(a, b, c) => state.maj3_activate(a, b, c),
        Command::NotActivate { src, dst } => state.not_row(src, dst),
        Command::InitConstant { row, value } => state.init_constant(row, value),
    }
}

/// Replay every command of `program` against `state` in order.
///
/// On error the state reflects the commands applied before the failing one.
pub fn execute_program(program: &MicroProgram, state: &mut SubarrayState) -> Result<()> {
    for command in &program.commands {
        apply_command(state, command)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pum::subarray::SubarrayConfig;

    #[test]
    fn text_format_round_trip() {
        let text = "INITC 13 0\nCOPY 0 9\nCOPY 1 10\nCOPY 13 11\nTRA 9 10 11\nNOT 9 12\nCOPY 9 2\n";
        let program: MicroProgram = text.parse().unwrap();
        assert_eq!(program.to_string(), text);
        let counts = program.counts();
        assert_eq!(counts.copies, 4);
        assert_eq!(counts.triple_activations, 1);
        assert_eq!(counts.not_activations, 1);
        assert_eq!(counts.constant_inits, 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "COPY 1 2\n\nTRA 1 2\n".parse::<MicroProgram>().unwrap_err();
        assert!(matches!(err, PumError::Parse { line: 3, .. }));
        let err = "JUMP 3\n".parse::<MicroProgram>().unwrap_err();
        assert!(matches!(err, PumError::Parse { line: 1, .. }));
        assert!("INITC 4 2".parse::<MicroProgram>().is_err());
    }

    #[test]
    fn empty_program_leaves_state_unchanged() {
        let mut state = SubarrayState::new(SubarrayConfig::new(16, 8, 3).unwrap()).unwrap();
        state.write_row(0, &[0b1011_0110]).unwrap();
        let before = state.clone();
        execute_program(&MicroProgram::new(), &mut state).unwrap();
        assert_eq!(state.row(0).unwrap(), before.row(0).unwrap());
        assert_eq!(state.activation_log().total(), 0);
    }

    #[test]
    fn append_hoists_constant_inits() {
        let mut a: MicroProgram = "INITC 13 0\nCOPY 0 9\n".parse().unwrap();
        let b: MicroProgram = "INITC 14 1\nINITC 13 0\nCOPY 1 10\n".parse().unwrap();
        a.append(&b);
        assert_eq!(a.to_string(), "INITC 13 0\nINITC 14 1\nCOPY 0 9\nCOPY 1 10\n");
    }
}
