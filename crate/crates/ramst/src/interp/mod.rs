//! Operational semantics for ST, STV, and STR.
//!
//! Updates absorb all partiality into inactivity: an extension with an
//! undefined argument or value, or over an occupied spot, does nothing.
//! Loops run in passes; after each pass the re-entry conditions are checked
//! in order (guard, variant shrink, rank non-growth, depletion) and the
//! first failure is the recorded exit reason. Equations in guards compare
//! total valuations where "undefined" equals itself, so `t == omega` is the
//! definedness test.

mod metrics;
mod state;

pub use metrics::{ExitReason, LoopActivation, Metrics, PassLedger, TraceEvent, TraceLevel};
pub use state::AtomAllocator;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::checker::{check, LoopInfo};
use crate::structure::{eval_term, Structure, StructureError, Vocabulary};
use crate::structure::Term;
use crate::syntax::{AssignRhs, Dialect, Guard, Program, SourceUnit, Span, UpdateAst};

use state::ExecState;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unit rejected by the checker:\n{0}")]
    Rejected(String),
    #[error("input structure does not fit the unit vocabulary: {0}")]
    Input(String),
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64 },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Run configuration. Fuel is a safety net for ST only: STV and STR loops
/// terminate by construction and run unbounded. The seed offsets the fresh
/// atom stream; it never changes step counts or structure shape.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExecConfig {
    pub fuel: Option<u64>,
    pub seed: u64,
    pub trace: TraceLevel,
}

impl ExecConfig {
    pub fn seeded(seed: u64) -> ExecConfig {
        ExecConfig {
            seed,
            ..ExecConfig::default()
        }
    }
}

/// Total valuation of a guard over an immutable structure.
pub fn eval_guard(s: &Structure, g: &Guard) -> bool {
    match g {
        Guard::True => true,
        Guard::False => false,
        Guard::Eq(a, b) => eval_term(s, a) == eval_term(s, b),
        Guard::Not(g) => !eval_guard(s, g),
        Guard::And(a, b) => eval_guard(s, a) && eval_guard(s, b),
        Guard::Or(a, b) => eval_guard(s, a) || eval_guard(s, b),
    }
}

/// Apply one update to an immutable structure, returning the new structure
/// and whether the update was active. This is the reference semantics; the
/// run loop applies the same rules on its mutable state.
pub fn apply_update(
    s: &Structure,
    u: &UpdateAst,
    alloc: &mut AtomAllocator,
) -> (Structure, bool) {
    let mut out = s.clone();
    let active = match u {
        UpdateAst::Extension { head, args, value } => {
            let vals: Option<crate::structure::ArgTuple> =
                args.iter().map(|t| eval_term(s, t)).collect();
            match (vals, eval_term(s, value)) {
                (Some(vals), Some(v)) if out.component(*head).get(&vals).is_none() => {
                    out.component_mut(*head).insert(vals, v);
                    true
                }
                _ => false,
            }
        }
        UpdateAst::Contraction { head, args } => {
            let vals: Option<crate::structure::ArgTuple> =
                args.iter().map(|t| eval_term(s, t)).collect();
            match vals {
                Some(vals) => out.component_mut(*head).remove(&vals).is_some(),
                None => false,
            }
        }
        UpdateAst::Inception { token } => {
            if out.component(*token).get(&[]).is_none() {
                let a = alloc.fresh();
                out.component_mut(*token).insert(Default::default(), a);
                true
            } else {
                false
            }
        }
    };
    (out, active)
}

struct Exec<'a> {
    st: ExecState,
    vocab: &'a Vocabulary,
    fuel: Option<u64>,
    steps: u64,
    activations: Vec<LoopActivation>,
    trace: Vec<TraceEvent>,
    level: TraceLevel,
    loop_ids: FxHashMap<*const Program, usize>,
    loops: Vec<LoopInfo>,
}

impl<'a> Exec<'a> {
    fn step(&mut self) -> Result<(), RunError> {
        self.steps += 1;
        if let Some(f) = self.fuel {
            if self.steps > f {
                return Err(RunError::FuelExhausted { steps: self.steps });
            }
        }
        Ok(())
    }

    fn guard_step(&mut self, g: &Guard, pos: Span) -> Result<bool, RunError> {
        self.step()?;
        let v = self.eval_guard(g);
        if self.level == TraceLevel::Full {
            self.trace.push(TraceEvent::Guard { pos, value: v });
        }
        Ok(v)
    }

    fn eval_guard(&self, g: &Guard) -> bool {
        match g {
            Guard::True => true,
            Guard::False => false,
            Guard::Eq(a, b) => self.st.eval(a) == self.st.eval(b),
            Guard::Not(g) => !self.eval_guard(g),
            Guard::And(a, b) => self.eval_guard(a) && self.eval_guard(b),
            Guard::Or(a, b) => self.eval_guard(a) || self.eval_guard(b),
        }
    }

    fn trace_update(&mut self, pos: Span, head: usize, kind: &'static str, active: bool) {
        if self.level == TraceLevel::Full {
            self.trace.push(TraceEvent::UpdateApplied {
                pos,
                head: self.st.names[head].clone(),
                kind,
                active,
                size: self.st.total_size(),
            });
        }
    }

    fn eval_args(&self, args: &[Term]) -> Option<crate::structure::ArgTuple> {
        let mut vals = crate::structure::ArgTuple::new();
        for a in args {
            vals.push(self.st.eval(a)?);
        }
        Some(vals)
    }

    fn exec_extension(
        &mut self,
        head: usize,
        args: &[Term],
        value: &Term,
        pos: Span,
    ) -> Result<bool, RunError> {
        self.step()?;
        let active = match (self.eval_args(args), self.st.eval(value)) {
            (Some(vals), Some(v)) => self.st.apply_ext(head, &vals, v),
            _ => false,
        };
        self.trace_update(pos, head, "ext", active);
        Ok(active)
    }

    fn exec_contraction(&mut self, head: usize, args: &[Term], pos: Span) -> Result<bool, RunError> {
        self.step()?;
        let active = match self.eval_args(args) {
            Some(vals) => self.st.apply_con(head, &vals),
            None => false,
        };
        self.trace_update(pos, head, "con", active);
        Ok(active)
    }

    fn exec_inception(&mut self, token: usize, pos: Span) -> Result<bool, RunError> {
        self.step()?;
        let active = self.st.apply_inc(token);
        self.trace_update(pos, token, "new", active);
        Ok(active)
    }

    fn exec(&mut self, p: &Program) -> Result<(), RunError> {
        match p {
            Program::Update(u, pos) => {
                match u {
                    UpdateAst::Extension { head, args, value } => {
                        self.exec_extension(head.index(), args, value, *pos)?;
                    }
                    UpdateAst::Contraction { head, args } => {
                        self.exec_contraction(head.index(), args, *pos)?;
                    }
                    UpdateAst::Inception { token } => {
                        self.exec_inception(token.index(), *pos)?;
                    }
                }
                Ok(())
            }
            Program::Assign {
                head,
                args,
                rhs,
                span,
            } => {
                // Exactly the desugared update sequence, over the hidden
                // scratch token; arguments re-evaluate at each sub-update.
                let scratch = self.st.scratch;
                let h = head.index();
                match rhs {
                    AssignRhs::Term(q) => {
                        // ext $a = q
                        self.step()?;
                        let active = match self.st.eval(q) {
                            Some(v) => self.st.apply_ext(scratch, &[], v),
                            None => false,
                        };
                        self.trace_update(*span, scratch, "ext", active);
                        // con f(t...)
                        self.exec_contraction(h, args, *span)?;
                        // ext f(t...) = $a
                        self.step()?;
                        let saved = self.st.lookup(scratch, &[]);
                        let active = match (self.eval_args(args), saved) {
                            (Some(vals), Some(v)) => self.st.apply_ext(h, &vals, v),
                            _ => false,
                        };
                        self.trace_update(*span, h, "ext", active);
                        // con $a
                        self.step()?;
                        let active = self.st.apply_con(scratch, &[]);
                        self.trace_update(*span, scratch, "con", active);
                    }
                    AssignRhs::New => {
                        self.exec_inception(scratch, *span)?;
                        self.step()?;
                        let saved = self.st.lookup(scratch, &[]);
                        let active = match (self.eval_args(args), saved) {
                            (Some(vals), Some(v)) => self.st.apply_ext(h, &vals, v),
                            _ => false,
                        };
                        self.trace_update(*span, h, "ext", active);
                        self.step()?;
                        let active = self.st.apply_con(scratch, &[]);
                        self.trace_update(*span, scratch, "con", active);
                    }
                }
                Ok(())
            }
            Program::Seq(a, b) => {
                self.exec(a)?;
                self.exec(b)
            }
            Program::If {
                guard,
                then_branch,
                else_branch,
                span,
            } => {
                if self.guard_step(guard, *span)? {
                    self.exec(then_branch)
                } else {
                    self.exec(else_branch)
                }
            }
            Program::Do {
                guard,
                variant,
                body,
                span,
            } => {
                let lid = self.loop_ids[&(p as *const Program)];
                match variant {
                    None => self.exec_st_loop(lid, guard, body, *span),
                    Some(_) => self.exec_variant_loop(lid, guard, body, *span),
                }
            }
        }
    }

    fn exec_st_loop(
        &mut self,
        lid: usize,
        guard: &Guard,
        body: &Program,
        pos: Span,
    ) -> Result<(), RunError> {
        if self.level != TraceLevel::Off {
            self.trace.push(TraceEvent::LoopEnter {
                loop_id: lid,
                pos,
                variant_size: 0,
                rank_size: self.st.rank_size[0],
            });
        }
        let rank_size_at_entry = self.st.rank_size[0];
        let mut passes = 0u64;
        while self.guard_step(guard, pos)? {
            self.exec(body)?;
            passes += 1;
            if self.level != TraceLevel::Off {
                self.trace.push(TraceEvent::PassEnd {
                    loop_id: lid,
                    pass: passes,
                    ledger: vec![],
                    size: self.st.total_size(),
                });
            }
        }
        self.finish_loop(lid, pos, 0, rank_size_at_entry, 0, passes, ExitReason::GuardFalse);
        Ok(())
    }

    fn exec_variant_loop(
        &mut self,
        lid: usize,
        guard: &Guard,
        body: &Program,
        pos: Span,
    ) -> Result<(), RunError> {
        let info = self.loops[lid].clone();
        let variant_at_entry = self.st.variant_size(&info.variant);
        let rank_size_at_entry = self.st.rank_size[info.rank as usize];
        if self.level != TraceLevel::Off {
            self.trace.push(TraceEvent::LoopEnter {
                loop_id: lid,
                pos,
                variant_size: variant_at_entry,
                rank_size: rank_size_at_entry,
            });
        }
        let mut passes = 0u64;
        let exit;
        if !self.guard_step(guard, pos)? {
            exit = ExitReason::GuardFalse;
        } else if variant_at_entry == 0 {
            exit = ExitReason::VariantDepleted;
        } else {
            loop {
                let sizes_before = self.st.sizes.clone();
                let ranks_before = self.st.rank_size.clone();
                let ext_before = self.st.cum_ext.clone();
                let con_before = self.st.cum_con.clone();
                let variant_before = self.st.variant_size(&info.variant);
                self.exec(body)?;
                passes += 1;
                debug_assert!(self.ledger_agrees(&sizes_before, &ext_before, &con_before));
                if self.level != TraceLevel::Off {
                    let ledger = self.pass_ledger(&ext_before, &con_before);
                    self.trace.push(TraceEvent::PassEnd {
                        loop_id: lid,
                        pass: passes,
                        ledger,
                        size: self.st.total_size(),
                    });
                }
                let guard_ok = self.guard_step(guard, pos)?;
                let variant_now = self.st.variant_size(&info.variant);
                if !guard_ok {
                    exit = ExitReason::GuardFalse;
                    break;
                }
                if variant_now >= variant_before {
                    exit = ExitReason::VariantNotShrunk;
                    break;
                }
                if let Some(&j) = info
                    .monitored
                    .iter()
                    .find(|&&j| self.st.rank_size[j as usize] > ranks_before[j as usize])
                {
                    exit = ExitReason::RankGrew(j);
                    break;
                }
                if variant_now == 0 {
                    exit = ExitReason::VariantDepleted;
                    break;
                }
            }
        }
        self.finish_loop(
            lid,
            pos,
            info.rank,
            rank_size_at_entry,
            variant_at_entry,
            passes,
            exit,
        );
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_loop(
        &mut self,
        loop_id: usize,
        pos: Span,
        rank: u32,
        rank_size_at_entry: u64,
        variant_size_at_entry: u64,
        passes: u64,
        exit: ExitReason,
    ) {
        if self.level != TraceLevel::Off {
            self.trace.push(TraceEvent::LoopExit {
                loop_id,
                reason: exit,
                passes,
            });
        }
        self.activations.push(LoopActivation {
            loop_id,
            pos,
            rank,
            rank_size_at_entry,
            variant_size_at_entry,
            passes,
            exit,
        });
    }

    fn pass_ledger(&self, ext_before: &[u64], con_before: &[u64]) -> Vec<(String, u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.st.names.len() {
            let e = self.st.cum_ext[i] - ext_before[i];
            let c = self.st.cum_con[i] - con_before[i];
            if e > 0 || c > 0 {
                out.push((self.st.names[i].clone(), e, c));
            }
        }
        out
    }

    fn ledger_agrees(&self, sizes_before: &[u64], ext_before: &[u64], con_before: &[u64]) -> bool {
        (0..self.st.sizes.len()).all(|i| {
            let delta = self.st.sizes[i] as i64 - sizes_before[i] as i64;
            let e = (self.st.cum_ext[i] - ext_before[i]) as i64;
            let c = (self.st.cum_con[i] - con_before[i]) as i64;
            e - c == delta
        })
    }
}

fn assign_loop_ids(prog: &Program) -> FxHashMap<*const Program, usize> {
    let mut map = FxHashMap::default();
    let mut next = 0usize;
    prog.walk(&mut |p| {
        if matches!(p, Program::Do { .. }) {
            map.insert(p as *const Program, next);
            next += 1;
        }
    });
    map
}

/// Big-step execution of an accepted unit on an input structure. The input
/// is expanded trivially to the unit vocabulary (ids the input lacks start
/// empty); ids the unit does not declare are rejected.
pub fn run(
    unit: &SourceUnit,
    input: &Structure,
    cfg: ExecConfig,
) -> Result<(Structure, Metrics, Vec<TraceEvent>), RunError> {
    let report = check(unit);
    if !report.accepted() {
        return Err(RunError::Rejected(report.machine_format("<unit>")));
    }
    let st = ExecState::load(&unit.vocab, input, cfg.seed).map_err(RunError::Input)?;
    let input_rank_sizes = st.rank_size.clone();
    let fuel = if unit.dialect == Dialect::St {
        cfg.fuel
    } else {
        None
    };
    let mut loops = report.loops;
    loops.sort_by_key(|l| l.loop_id);
    debug_assert!(loops.iter().enumerate().all(|(i, l)| i == l.loop_id));
    let mut exec = Exec {
        st,
        vocab: &unit.vocab,
        fuel,
        steps: 0,
        activations: Vec::new(),
        trace: Vec::new(),
        level: cfg.trace,
        loop_ids: assign_loop_ids(&unit.prog),
        loops,
    };
    exec.exec(&unit.prog)?;
    let metrics = Metrics {
        steps: exec.steps,
        rank_highwater: exec.st.rank_hw.clone(),
        input_rank_sizes,
        activations: exec.activations,
    };
    let out = exec.st.into_structure(exec.vocab);
    Ok((out, metrics, exec.trace))
}

/// Transducer semantics: run, then read the output as a reduct. Outputs
/// are compared up to isomorphism.
pub fn run_transducer(
    unit: &SourceUnit,
    input: &Structure,
    out_vocab: &Vocabulary,
    cfg: ExecConfig,
) -> Result<(Structure, Metrics), RunError> {
    let (full, metrics, _) = run(unit, input, cfg)?;
    let out = full.reduct(out_vocab)?;
    Ok((out, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{encode_numeral_named, Atom, Vocabulary};
    use crate::structure::Structure;
    use crate::syntax::parse_program;

    fn run_on(src: &str, input: &Structure) -> (Structure, Metrics) {
        let unit = parse_program(src).unwrap();
        let (s, m, _) = run(&unit, input, ExecConfig::default()).unwrap();
        (s, m)
    }

    #[test]
    fn extension_over_defined_spot_is_inactive() {
        let unit = parse_program("dialect ST vocab { a:0, b:0, f:1 } ext f(a) = b").unwrap();
        let mut input = Structure::empty(unit.vocab.erase_ranks());
        let a = input.vocab().id("a").unwrap();
        let b = input.vocab().id("b").unwrap();
        let f = input.vocab().id("f").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        input.component_mut(b).insert(Default::default(), Atom(1));
        input
            .component_mut(f)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(0)]), Atom(5));
        let (out, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(out, input);
        assert_eq!(m.steps, 1);
    }

    #[test]
    fn contraction_removes_only_its_own_id() {
        let src = "dialect ST vocab { a:0, f:1, g:1 } con f(a)";
        let unit = parse_program(src).unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let a = input.vocab().id("a").unwrap();
        let f = input.vocab().id("f").unwrap();
        let g = input.vocab().id("g").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        input
            .component_mut(f)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(0)]), Atom(1));
        input
            .component_mut(g)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(0)]), Atom(1));
        let (out, _) = run_on(src, &input);
        assert_eq!(out.size_of(out.vocab().id("f").unwrap()), 0);
        assert_eq!(out.size_of(out.vocab().id("g").unwrap()), 1);
    }

    #[test]
    fn second_inception_is_a_no_op() {
        let src = "dialect ST vocab { c:0 } new c; new c";
        let input = Structure::empty(Vocabulary::unranked([("c", 0)]).unwrap());
        let (out, m) = run_on(src, &input);
        assert_eq!(out.size(), 1);
        assert_eq!(m.steps, 2);
    }

    #[test]
    fn inception_binds_outside_the_scope() {
        let src = "dialect ST vocab { c:0, f:1 } new c";
        let mut input = Structure::empty(Vocabulary::unranked([("c", 0), ("f", 1)]).unwrap());
        let f = input.vocab().id("f").unwrap();
        input
            .component_mut(f)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(5)]), Atom(9));
        let (out, _) = run_on(src, &input);
        let c = out.vocab().id("c").unwrap();
        let fresh = out.component(c).get(&[]).unwrap();
        assert!(fresh > Atom(9));
    }

    #[test]
    fn omega_equals_omega() {
        let unit = parse_program(
            "dialect ST vocab { a:0, b:0, f:1 } \
             if [f(a) == omega] { new a } { new b }",
        )
        .unwrap();
        let input = Structure::empty(unit.vocab.clone());
        let (out, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        // f(a) is undefined, so the equation holds and `a` is born.
        let a = out.vocab().id("a").unwrap();
        assert_eq!(out.size_of(a), 1);
        assert_eq!(m.steps, 2);
    }

    #[test]
    fn unshrinkable_variant_exits_after_one_pass() {
        let unit = parse_program(
            "dialect STV vocab { c:0, f:1 } do [true] [f] { ext f(c) = c }",
        )
        .unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let c = input.vocab().id("c").unwrap();
        let f = input.vocab().id("f").unwrap();
        input.component_mut(c).insert(Default::default(), Atom(0));
        input
            .component_mut(f)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(9)]), Atom(9));
        let (_, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(m.activations.len(), 1);
        assert_eq!(m.activations[0].passes, 1);
        assert_eq!(m.activations[0].exit, ExitReason::VariantNotShrunk);
    }

    #[test]
    fn guard_is_checked_before_depletion() {
        // Consume a numeral chain front to back; the def-guard goes false
        // on the same pass that empties the variant, and the guard is
        // checked first.
        let unit = parse_program(
            "dialect STV vocab { z:0, s:1, root:0, w:0, b:0 } \
             set w = z; \
             do [def(s(w))] [s] { set b = s(w); con s(w); set w = b }",
        )
        .unwrap();
        let input = encode_numeral_named(5, "z", "s", "root");
        let (out, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        let s = out.vocab().id("s").unwrap();
        assert_eq!(out.size_of(s), 0);
        assert_eq!(m.activations[0].passes, 5);
        assert_eq!(m.activations[0].exit, ExitReason::GuardFalse);
    }

    #[test]
    fn depleting_loop_exits_depleted_under_true_guard() {
        let unit = parse_program(
            "dialect STV vocab { z:0, s:1, root:0, w:0, b:0 } \
             set w = z; \
             do [true] [s] { if [def(s(w))] { set b = s(w); con s(w); set w = b } { new b } }",
        )
        .unwrap();
        let input = encode_numeral_named(5, "z", "s", "root");
        let (_, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(m.activations[0].passes, 5);
        assert_eq!(m.activations[0].exit, ExitReason::VariantDepleted);
    }

    #[test]
    fn guard_false_at_entry_skips_loop() {
        let unit = parse_program("dialect STV vocab { a:0, f:1 } do [false] [f] { con f(a) }")
            .unwrap();
        let input = Structure::empty(unit.vocab.clone());
        let (_, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(m.activations[0].passes, 0);
        assert_eq!(m.activations[0].exit, ExitReason::GuardFalse);
        assert_eq!(m.steps, 1);
    }

    #[test]
    fn empty_variant_at_entry_skips_loop() {
        let unit = parse_program("dialect STV vocab { a:0, f:1 } do [true] [f] { con f(a) }")
            .unwrap();
        let input = Structure::empty(unit.vocab.clone());
        let (_, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(m.activations[0].passes, 0);
        assert_eq!(m.activations[0].exit, ExitReason::VariantDepleted);
    }

    #[test]
    fn rank_growth_exits_str_loop() {
        let unit = parse_program(
            "dialect STR vocab { a:0 @0, f:1 @1, g:1 @1, h:1 @1 } \
             do [true] [f] { con f(a); ext g(a) = a; ext h(a) = a }",
        )
        .unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let a = input.vocab().id("a").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        let f = input.vocab().id("f").unwrap();
        for i in 0..3 {
            input
                .component_mut(f)
                .insert(crate::structure::ArgTuple::from_slice(&[Atom(i)]), Atom(i));
        }
        let (_, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(m.activations[0].passes, 1);
        assert_eq!(m.activations[0].exit, ExitReason::RankGrew(1));
    }

    #[test]
    fn st_loop_needs_fuel_to_stop() {
        let unit = parse_program("dialect ST vocab { c:0 } do [true] { new c }").unwrap();
        let input = Structure::empty(unit.vocab.clone());
        let err = run(
            &unit,
            &input,
            ExecConfig {
                fuel: Some(1000),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, RunError::FuelExhausted { .. }));
    }

    #[test]
    fn fuel_is_ignored_outside_st() {
        let unit = parse_program("dialect STV vocab { a:0, f:1 } do [true] [f] { con f(a) }")
            .unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let a = input.vocab().id("a").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        let f = input.vocab().id("f").unwrap();
        input
            .component_mut(f)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(0)]), Atom(0));
        let cfg = ExecConfig {
            fuel: Some(1),
            ..Default::default()
        };
        assert!(run(&unit, &input, cfg).is_ok());
    }

    #[test]
    fn assignment_on_token_is_net_neutral() {
        let unit = parse_program("dialect ST vocab { c:0 } set c = c").unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let c = input.vocab().id("c").unwrap();
        input.component_mut(c).insert(Default::default(), Atom(4));
        let (out, m, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(out, input);
        assert_eq!(m.steps, 4);
    }

    #[test]
    fn apply_update_matches_run_semantics() {
        let unit = parse_program("dialect ST vocab { a:0, b:0, f:1 } ext f(a) = b").unwrap();
        let mut input = Structure::empty(unit.vocab.clone());
        let a = input.vocab().id("a").unwrap();
        let b = input.vocab().id("b").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        input.component_mut(b).insert(Default::default(), Atom(1));
        let Program::Update(u, _) = &unit.prog else {
            panic!()
        };
        let mut alloc = AtomAllocator::above(input.max_atom(), 0);
        let (direct, active) = apply_update(&input, u, &mut alloc);
        assert!(active);
        let (via_run, _, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        assert_eq!(direct, via_run);
    }
}
