//! Symbolic resource certificates for accepted STR units.
//!
//! For a unit with ranks up to `ell`, the certificate carries a time
//! polynomial `M_P[n_0..n_ell]` with `Time_P(sigma) <= M_P[|sigma|_0, ..,
//! |sigma|_ell]`, and per-rank excess polynomials `Z_{P,j}[n_{j+1}..n_ell]`
//! with `Space_{P,j}(sigma) <= |sigma|_j + Z_{P,j}[...]`, where space is the
//! high-water mark of `|sigma'|_j` over the whole trace.
//!
//! The recursion follows the loop rule `M_P = n_r * (1 + M_Q[B_0..B_ell])`
//! with `B_j = n_j + Z_{P,j}`, and combines branches by sum to stay
//! subtraction-free; every choice over-approximates. Two excess rules are
//! sharper than naive zero: a loop of rank `r` keeps the body's own excess
//! at ranks `j >= r` (within-pass transients and the final pass can stand),
//! and multiplies the body excess by `n_r` at ranks `j < r` (growth there
//! accumulates across passes). Bounds exist only for STR: ST and STV units
//! have no polynomial certificate.

mod poly;

pub use poly::PositivePoly;

use num_bigint::BigInt;
use thiserror::Error;

use crate::checker::{check, max_rank, LoopInfo};
use crate::interp::Metrics;
use crate::syntax::{AssignRhs, Dialect, Program, SourceUnit, UpdateAst};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("resource bounds are defined for STR units, not {0}")]
    NotStr(crate::syntax::Dialect),
    #[error("unit rejected by the checker:\n{0}")]
    Rejected(String),
}

/// Version tag for the step-cost conventions baked into the polynomials.
/// Updates cost 1; assignment sugar costs its desugared length (4, or 3 for
/// `= new`); every guard evaluation costs 1; sequencing is over-approximated
/// with one extra unit per `;`.
pub const COST_MODEL: &str = "steps-v1: update=1 assign=4|3 guard=1 seq=+1";

/// A self-describing resource certificate.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub ell: u32,
    pub time: PositivePoly,
    /// Index `j` holds `Z_{P,j}`, the additive space excess at rank `j`
    /// (a polynomial in `n_{j+1}..n_ell` only).
    pub space: Vec<PositivePoly>,
    pub cost_model: &'static str,
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "cost model: {}", self.cost_model)?;
        writeln!(f, "time: {}", self.time)?;
        for (j, z) in self.space.iter().enumerate() {
            writeln!(f, "space[{j}]: n{j} + {z}")?;
        }
        Ok(())
    }
}

struct NodeBounds {
    m: PositivePoly,
    z: Vec<PositivePoly>,
}

struct Analyzer<'a> {
    nvars: usize,
    vocab: &'a crate::structure::Vocabulary,
    loops: &'a [LoopInfo],
    next_loop: usize,
}

impl Analyzer<'_> {
    fn zero_z(&self) -> Vec<PositivePoly> {
        vec![PositivePoly::zero(self.nvars); self.nvars]
    }

    fn rank_of(&self, id: crate::structure::FuncId) -> usize {
        self.vocab.rank(id) as usize
    }

    /// `B_i = n_i + z[i]` as a substitution map.
    fn b_map(&self, z: &[PositivePoly]) -> Vec<PositivePoly> {
        (0..self.nvars)
            .map(|i| PositivePoly::var(self.nvars, i).add(&z[i]))
            .collect()
    }

    fn analyze(&mut self, p: &Program) -> NodeBounds {
        match p {
            Program::Update(u, _) => {
                let mut z = self.zero_z();
                match u {
                    UpdateAst::Extension { head, .. } => {
                        let r = self.rank_of(*head);
                        z[r] = z[r].add_const(1);
                    }
                    UpdateAst::Inception { token } => {
                        let r = self.rank_of(*token);
                        z[r] = z[r].add_const(1);
                    }
                    UpdateAst::Contraction { .. } => {}
                }
                NodeBounds {
                    m: PositivePoly::constant(self.nvars, 1),
                    z,
                }
            }
            Program::Assign { head, rhs, .. } => {
                // Scratch token is rank 0 and holds one transient entry.
                let mut z = self.zero_z();
                z[0] = z[0].add_const(1);
                let r = self.rank_of(*head);
                z[r] = z[r].add_const(1);
                let cost = match rhs {
                    AssignRhs::Term(_) => 4,
                    AssignRhs::New => 3,
                };
                NodeBounds {
                    m: PositivePoly::constant(self.nvars, cost),
                    z,
                }
            }
            Program::Seq(a, b) => {
                let na = self.analyze(a);
                let nb = self.analyze(b);
                let ba = self.b_map(&na.z);
                let z = (0..self.nvars)
                    .map(|j| na.z[j].add(&nb.z[j].subst_all(&ba)))
                    .collect();
                NodeBounds {
                    m: na.m.add(&nb.m).add_const(1),
                    z,
                }
            }
            Program::If {
                then_branch,
                else_branch,
                ..
            } => {
                let na = self.analyze(then_branch);
                let nb = self.analyze(else_branch);
                let z = (0..self.nvars).map(|j| na.z[j].add(&nb.z[j])).collect();
                NodeBounds {
                    m: na.m.add(&nb.m).add_const(1),
                    z,
                }
            }
            Program::Do { body, .. } => {
                let info = &self.loops[self.next_loop];
                debug_assert_eq!(info.loop_id, self.next_loop);
                self.next_loop += 1;
                let r = info.rank as usize;
                let nq = self.analyze(body);
                let n_r = PositivePoly::var(self.nvars, r);
                // Ranks >= r cannot grow across re-entered passes, and the
                // body bound already covers transients and the final pass.
                let mut z = self.zero_z();
                for j in (0..self.nvars).rev() {
                    if j >= r {
                        z[j] = nq.z[j].clone();
                    } else {
                        // Up to n_r passes each add at most the body excess,
                        // evaluated at the loop's own inflated sizes.
                        let b = self.b_map(&z);
                        z[j] = n_r.mul(&nq.z[j].subst_all(&b));
                    }
                }
                let b = self.b_map(&z);
                let m = n_r.mul(&nq.m.subst_all(&b).add_const(1)).add_const(1);
                NodeBounds { m, z }
            }
        }
    }
}

/// Full certificate for an accepted STR unit.
pub fn certificate(unit: &SourceUnit) -> Result<Certificate, BoundsError> {
    if unit.dialect != Dialect::Str {
        return Err(BoundsError::NotStr(unit.dialect));
    }
    let report = check(unit);
    if !report.accepted() {
        return Err(BoundsError::Rejected(report.machine_format("<unit>")));
    }
    let ell = max_rank(unit).expect("dialect checked above");
    let mut loops = report.loops;
    loops.sort_by_key(|l| l.loop_id);
    let mut an = Analyzer {
        nvars: ell as usize + 1,
        vocab: &unit.vocab,
        loops: &loops,
        next_loop: 0,
    };
    let nb = an.analyze(&unit.prog);
    Ok(Certificate {
        ell,
        time: nb.m,
        space: nb.z,
        cost_model: COST_MODEL,
    })
}

/// `M_P`: polynomial bound on the number of steps.
pub fn time_bound(unit: &SourceUnit) -> Result<PositivePoly, BoundsError> {
    Ok(certificate(unit)?.time)
}

/// `Z_{P,j}`: polynomial bound on the space excess at rank `j`.
pub fn space_bound(unit: &SourceUnit, j: u32) -> Result<PositivePoly, BoundsError> {
    let cert = certificate(unit)?;
    cert.space
        .get(j as usize)
        .cloned()
        .ok_or(BoundsError::NotStr(unit.dialect))
}

/// Result of checking one run's metrics against a certificate. Slack is
/// bound minus measurement: negative slack means the bound was violated.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub pass: bool,
    pub time_slack: BigInt,
    pub space_slack: Vec<BigInt>,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} time_slack={} space_slack=[{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.time_slack,
            self.space_slack
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Check measured metrics against the certificate, at the input sizes the
/// run recorded.
pub fn certify_metrics(cert: &Certificate, metrics: &Metrics) -> Verdict {
    let mut sizes = metrics.input_rank_sizes.clone();
    sizes.resize(cert.ell as usize + 1, 0);
    let time_val = cert.time.eval(&sizes);
    let time_slack = BigInt::from(time_val) - BigInt::from(metrics.steps);
    let mut space_slack = Vec::new();
    let mut pass = time_slack >= BigInt::ZERO;
    for j in 0..=cert.ell as usize {
        let z = cert.space[j].eval(&sizes);
        let bound = BigInt::from(z) + BigInt::from(sizes[j]);
        let hw = metrics
            .rank_highwater
            .get(j)
            .copied()
            .unwrap_or(0);
        let slack = bound - BigInt::from(hw);
        pass &= slack >= BigInt::ZERO;
        space_slack.push(slack);
    }
    Verdict {
        pass,
        time_slack,
        space_slack,
    }
}

/// Convenience wrapper: build the certificate and check one run.
pub fn certify_run(unit: &SourceUnit, metrics: &Metrics) -> Result<Verdict, BoundsError> {
    let cert = certificate(unit)?;
    Ok(certify_metrics(&cert, metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{run, ExecConfig};
    use crate::structure::{Atom, Structure};
    use crate::syntax::parse_program;

    #[test]
    fn single_update_costs_one() {
        let unit =
            parse_program("dialect STR vocab { a:0 @0, f:1 @0 } ext f(a) = a").unwrap();
        assert_eq!(time_bound(&unit).unwrap().to_string(), "1");
    }

    #[test]
    fn contraction_loop_is_linear() {
        let unit = parse_program(
            "dialect STR vocab { a:0 @0, f:1 @0 } do [true] [f] { con f(a) }",
        )
        .unwrap();
        let m = time_bound(&unit).unwrap();
        assert_eq!(m.degree(), 1);
        // Measured steps never exceed the bound at the real input sizes.
        let mut input = Structure::empty(unit.vocab.clone());
        let a = input.vocab().id("a").unwrap();
        input.component_mut(a).insert(Default::default(), Atom(0));
        let f = input.vocab().id("f").unwrap();
        for i in 0..6u32 {
            input
                .component_mut(f)
                .insert(crate::structure::ArgTuple::from_slice(&[Atom(i)]), Atom(i));
        }
        let (_, metrics, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        let v = certify_run(&unit, &metrics).unwrap();
        assert!(v.pass, "{v}");
    }

    #[test]
    fn non_str_units_have_no_bounds() {
        let unit = parse_program("dialect STV vocab { a:0, f:1 } do [][f] { con f(a) }").unwrap();
        assert!(matches!(time_bound(&unit), Err(BoundsError::NotStr(_))));
    }

    #[test]
    fn loop_keeps_body_excess_at_its_own_rank() {
        // The body's transient extension at rank 0 survives in Z_{P,0}.
        let unit = parse_program(
            "dialect STR vocab { a:0 @0, b:0 @0, f:1 @0, g:1 @0 } \
             do [true] [f] { ext g(a) = a; con g(a); con f(a) }",
        )
        .unwrap();
        let cert = certificate(&unit).unwrap();
        assert!(!cert.space[0].is_zero());
    }

    #[test]
    fn lower_rank_excess_scales_with_the_loop_rank() {
        // Each pass of a rank-1 loop adds one rank-0 entry.
        let unit = parse_program(
            "dialect STR vocab { a:0 @0, g:1 @0, f:1 @1 } \
             do [true] [f] { con f(a); ext g(f(a)) = a }",
        )
        .unwrap();
        let cert = certificate(&unit).unwrap();
        assert_eq!(cert.space[0].degree_in(1), 1);
        assert!(cert.space[1].is_zero());
    }

    #[test]
    fn nesting_multiplies_time_degree() {
        let inner = parse_program(
            "dialect STR vocab { a:0 @0, f:1 @0 } do [true] [f] { con f(a) }",
        )
        .unwrap();
        let outer = parse_program(
            "dialect STR vocab { a:0 @0, f:1 @0, g:1 @1 } \
             do [true] [g] { con g(a); do [true] [f] { con f(a) } }",
        )
        .unwrap();
        let mi = time_bound(&inner).unwrap();
        let mo = time_bound(&outer).unwrap();
        assert_eq!(mi.degree(), 1);
        // Outer loop rank 1 over a rank-0 body: degree adds one.
        assert_eq!(mo.degree(), 2);
        assert_eq!(mo.degree_in(1), 1);
    }

    #[test]
    fn adversarial_metrics_fail_with_negative_slack() {
        let unit =
            parse_program("dialect STR vocab { a:0 @0, f:1 @0 } ext f(a) = a").unwrap();
        let cert = certificate(&unit).unwrap();
        let metrics = Metrics {
            steps: 1000,
            rank_highwater: vec![0],
            input_rank_sizes: vec![0],
            activations: vec![],
        };
        let v = certify_metrics(&cert, &metrics);
        assert!(!v.pass);
        assert!(v.time_slack < BigInt::ZERO);
    }

    #[test]
    fn empty_run_passes_trivially() {
        let unit =
            parse_program("dialect STR vocab { a:0 @0, f:1 @0 } con f(a)").unwrap();
        let input = Structure::empty(unit.vocab.clone());
        let (_, metrics, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        let v = certify_run(&unit, &metrics).unwrap();
        assert!(v.pass);
    }
}
