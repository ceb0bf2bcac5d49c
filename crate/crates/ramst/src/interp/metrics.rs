//! Run accounting: step counts, per-rank space high-water marks, per-pass
//! ledgers, and the trace stream.

use std::fmt;

use crate::syntax::Span;

/// Why a loop stopped iterating. The first three mirror the re-entry
/// conditions in order (guard, variant shrink, rank non-growth); depletion
/// is checked last and also covers entry with an already-empty variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitReason {
    GuardFalse,
    VariantNotShrunk,
    RankGrew(u32),
    VariantDepleted,
}

impl fmt::Display for ExitReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExitReason::GuardFalse => write!(f, "guard-false"),
            ExitReason::VariantNotShrunk => write!(f, "variant-not-shrunk"),
            ExitReason::RankGrew(j) => write!(f, "rank-grew({j})"),
            ExitReason::VariantDepleted => write!(f, "variant-depleted"),
        }
    }
}

/// One dynamic activation of a loop: a loop nested under another records
/// one activation per outer pass.
#[derive(Clone, Debug)]
pub struct LoopActivation {
    /// Pre-order index of the `do` node in the unit.
    pub loop_id: usize,
    pub pos: Span,
    /// Loop rank `r` (0 for ST and STV loops).
    pub rank: u32,
    /// `|sigma|_r` when the loop was entered.
    pub rank_size_at_entry: u64,
    /// `|T|` when the loop was entered.
    pub variant_size_at_entry: u64,
    /// Completed passes.
    pub passes: u64,
    pub exit: ExitReason,
}

/// Per-pass activity counters, indexed by identifier. The ledger invariant
/// ties them to sizes: for every id, `ext - con` equals the id's size delta
/// across the pass.
#[derive(Clone, Debug, Default)]
pub struct PassLedger {
    pub ext: Vec<u64>,
    pub con: Vec<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct Metrics {
    /// Executed updates plus guard evaluations: the trace length.
    pub steps: u64,
    /// Per-rank maximum of `|sigma'|_j` over the whole trace, input
    /// included. Index = rank.
    pub rank_highwater: Vec<u64>,
    /// Per-rank sizes of the (expanded) input, for certificates.
    pub input_rank_sizes: Vec<u64>,
    pub activations: Vec<LoopActivation>,
}

impl Metrics {
    /// Total completed passes of one syntactic loop across activations.
    pub fn passes_of(&self, loop_id: usize) -> u64 {
        self.activations
            .iter()
            .filter(|a| a.loop_id == loop_id)
            .map(|a| a.passes)
            .sum()
    }

    /// Single-line machine-readable record (stable field order).
    pub fn machine_line(&self) -> String {
        let hw: Vec<String> = self.rank_highwater.iter().map(u64::to_string).collect();
        let sizes: Vec<String> = self.input_rank_sizes.iter().map(u64::to_string).collect();
        let loops: Vec<String> = self
            .activations
            .iter()
            .map(|a| {
                format!(
                    "{{\"loop\":{},\"rank\":{},\"passes\":{},\"exit\":\"{}\"}}",
                    a.loop_id, a.rank, a.passes, a.exit
                )
            })
            .collect();
        format!(
            "{{\"steps\":{},\"rank_highwater\":[{}],\"input_rank_sizes\":[{}],\"activations\":[{}]}}",
            self.steps,
            hw.join(","),
            sizes.join(","),
            loops.join(",")
        )
    }
}

/// How much of the run to record in the returned trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TraceLevel {
    #[default]
    Off,
    /// Loop lifecycle events only.
    Loops,
    /// Every update and guard evaluation.
    Full,
}

/// One trace event. `Display` renders the stable line format used by the
/// CLI trace files and the golden tests.
#[derive(Clone, Debug)]
pub enum TraceEvent {
    UpdateApplied {
        pos: Span,
        head: String,
        kind: &'static str,
        active: bool,
        size: u64,
    },
    Guard {
        pos: Span,
        value: bool,
    },
    LoopEnter {
        loop_id: usize,
        pos: Span,
        variant_size: u64,
        rank_size: u64,
    },
    PassEnd {
        loop_id: usize,
        pass: u64,
        /// `(id name, ext, con)` for ids active in this pass.
        ledger: Vec<(String, u64, u64)>,
        size: u64,
    },
    LoopExit {
        loop_id: usize,
        reason: ExitReason,
        passes: u64,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::UpdateApplied {
                pos,
                head,
                kind,
                active,
                size,
            } => write!(
                f,
                "update pos={pos} head={head} kind={kind} active={active} size={size}"
            ),
            TraceEvent::Guard { pos, value } => write!(f, "guard pos={pos} value={value}"),
            TraceEvent::LoopEnter {
                loop_id,
                pos,
                variant_size,
                rank_size,
            } => write!(
                f,
                "loop-enter loop={loop_id} pos={pos} variant={variant_size} rank-size={rank_size}"
            ),
            TraceEvent::PassEnd {
                loop_id,
                pass,
                ledger,
                size,
            } => {
                write!(f, "pass-end loop={loop_id} pass={pass} size={size} ledger=")?;
                for (i, (name, e, c)) in ledger.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{name}:+{e}-{c}")?;
                }
                Ok(())
            }
            TraceEvent::LoopExit {
                loop_id,
                reason,
                passes,
            } => write!(f, "loop-exit loop={loop_id} reason={reason} passes={passes}"),
        }
    }
}
