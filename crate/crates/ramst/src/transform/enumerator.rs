//! Enumerators: programs that list the accessible atoms of a structure
//! into a chain.
//!
//! The emitted unit declares the measured identifiers at its top rank and
//! uses the pointer family as the main loop's variant: every pass moves
//! exactly one accessible entry out of the family (into shadows, which a
//! second sweep moves back), and that contraction pays for one step of the
//! breadth-first closure. Discovered atoms flow strictly downward: into a
//! master listing one rank below, through spawn-preserved scan copies for
//! tuple enumeration, past a chain-scan membership test, and finally into
//! the emitted listing chains. Tuples are drawn from the listing itself,
//! so arguments are always listed before a value: on free inputs the
//! enumerator is monotone. Atoms are listed once (membership filters
//! duplicates), which keeps the listing pointer injective.

use crate::structure::{FuncId, Term, Vocabulary};
use crate::syntax::{Guard, Program, SourceUnit};

use super::build::*;
use super::{TransducerSig, TransformError};

/// Official output names of [`gen_enumerator`]: head token and listing
/// pointer of the rank-0 chain.
pub const ENUM_OUT: [&str; 2] = ["a0", "l0"];

/// Sentinel-anchored working chain: the anchor atom heads the chain, so
/// the entry count equals the item count and appends are branch-free.
#[derive(Clone, Copy)]
pub(crate) struct SChain {
    pub cur: FuncId,
    pub ptr: FuncId,
    pub tail: FuncId,
}

impl SChain {
    pub fn declare(v: &mut VocabBuilder, name: &str, rank: u32) -> SChain {
        SChain {
            cur: v.tok(&format!("{name}_c"), 0),
            ptr: v.ptr(name, rank),
            tail: v.tok(&format!("{name}_t"), 0),
        }
    }

    /// Point both walk tokens back at the anchor.
    pub fn reset(&self, sent: FuncId) -> Vec<Program> {
        vec![set_tok(self.cur, tv(sent)), set_tok(self.tail, tv(sent))]
    }

    pub fn append(&self, item: FuncId) -> Vec<Program> {
        append_tail(self.ptr, self.tail, item)
    }

    pub fn pop(&self, item: FuncId) -> Vec<Program> {
        pop_link(self.ptr, self.cur, item)
    }

    /// Consume everything reachable from `cur`.
    pub fn drain(&self, scratch: FuncId) -> Program {
        dov(Guard::True, vec![self.ptr], seq(self.pop(scratch)))
    }
}

/// Proper chain (head token = first item), the external listing format.
#[derive(Clone, Copy)]
pub(crate) struct PChain {
    pub head: FuncId,
    pub ptr: FuncId,
    pub tail: FuncId,
}

impl PChain {
    pub fn declare(v: &mut VocabBuilder, head: &str, ptr: &str, rank: u32) -> PChain {
        PChain {
            head: v.tok(head, rank),
            ptr: v.ptr(ptr, rank),
            tail: v.tok(&format!("{ptr}_t"), 0),
        }
    }

    pub fn append(&self, item: FuncId) -> Program {
        iff(
            def(tv(self.head)),
            seq(append_tail(self.ptr, self.tail, item)),
            seq(vec![
                set_tok(self.head, tv(item)),
                set_tok(self.tail, tv(item)),
            ]),
        )
    }
}

/// Where a sweep moves the entries it proves accessible.
pub(crate) enum EnumDst {
    /// Move breadth-first witnesses to fresh shadows, then sweep them back.
    ShadowRestore,
    /// Move every accessible entry into this family (index-aligned with
    /// the source pointers); the source keeps only inaccessible junk.
    MoveTo(Vec<FuncId>),
}

pub(crate) struct EnumSpec<'a> {
    /// Uniquifying prefix for machinery identifiers.
    pub prefix: &'a str,
    pub src_tokens: &'a [FuncId],
    /// All declared at `top_rank` by the caller.
    pub src_ptrs: &'a [FuncId],
    pub top_rank: u32,
    pub dst: EnumDst,
    /// Extra sentinel-form listing copies to emit, `(name, rank)`.
    pub listings_sentinel: &'a [(String, u32)],
    /// Extra proper-chain listing copies to emit, `(head, ptr, rank)`.
    pub listings_proper: &'a [(String, String, u32)],
}

pub(crate) struct EnumBuilt {
    pub prog: Program,
    pub listings_sentinel: Vec<SChain>,
    pub listings_proper: Vec<PChain>,
}

struct Machinery {
    sent: FuncId,
    yes: FuncId,
    no: FuncId,
    master: SChain,
    master2: SChain,
    /// Scan chains per tuple position (index 0 = outermost).
    scan: Vec<SChain>,
    /// Refill sources for positions >= 1, with their spawn partners.
    src: Vec<(SChain, SChain)>,
    memb_src: SChain,
    memb_src2: SChain,
    memb_walk: SChain,
    /// Walk tokens per tuple position.
    pos_tok: Vec<FuncId>,
    cand: FuncId,
    mx: FuncId,
    mz: FuncId,
    memb: FuncId,
    gflag: FuncId,
    aflag: FuncId,
    /// Per-source-pointer "found here" flags.
    found: Vec<FuncId>,
    /// Stash for the found entry: argument tokens and value.
    fargs: Vec<FuncId>,
    fval: FuncId,
    nil: FuncId,
}

impl Machinery {
    /// Rebuild `targets` as copies of the master listing (spawning the
    /// master through its partner).
    fn cascade(&self, targets: &[SChain]) -> Program {
        let mut stmts = Vec::new();
        stmts.extend(self.master2.reset(self.sent));
        for t in targets {
            stmts.push(t.drain(self.mx));
            stmts.extend(t.reset(self.sent));
        }
        let mut body = self.master.pop(self.mx);
        body.extend(self.master2.append(self.mx));
        for t in targets {
            body.extend(t.append(self.mx));
        }
        stmts.push(dov(Guard::True, vec![self.master.ptr], seq(body)));
        stmts.extend(self.master.reset(self.sent));
        let mut back = self.master2.pop(self.mx);
        back.extend(self.master.append(self.mx));
        stmts.push(dov(Guard::True, vec![self.master2.ptr], seq(back)));
        seq(stmts)
    }

    /// `memb := yes/no` for the atom in `cand`, by scanning a spawned copy
    /// of the membership source.
    fn membership(&self) -> Program {
        let mut stmts = vec![set_tok(self.memb, tv(self.no))];
        stmts.extend(self.memb_src2.reset(self.sent));
        stmts.extend(self.memb_walk.reset(self.sent));
        let mut body = self.memb_src.pop(self.mz);
        body.extend(self.memb_src2.append(self.mz));
        body.extend(self.memb_walk.append(self.mz));
        stmts.push(dov(Guard::True, vec![self.memb_src.ptr], seq(body)));
        stmts.extend(self.memb_src.reset(self.sent));
        let mut back = self.memb_src2.pop(self.mz);
        back.extend(self.memb_src.append(self.mz));
        stmts.push(dov(Guard::True, vec![self.memb_src2.ptr], seq(back)));
        let mut walk = self.memb_walk.pop(self.mz);
        walk.push(iff(
            Guard::Eq(tv(self.mz), tv(self.cand)),
            set_tok(self.memb, tv(self.yes)),
            noop(self.nil),
        ));
        stmts.push(dov(Guard::True, vec![self.memb_walk.ptr], seq(walk)));
        seq(stmts)
    }
}

fn declare_machinery(
    v: &mut VocabBuilder,
    p: &str,
    top: u32,
    max_arity: usize,
) -> Machinery {
    assert!(
        top >= max_arity as u32 + 3,
        "enumerator needs rank headroom: top {top} < arity {max_arity} + 3"
    );
    let master_rank = top - 1;
    let scan: Vec<SChain> = (0..max_arity)
        .map(|i| SChain::declare(v, &format!("{p}sc{i}"), master_rank - 1 - i as u32))
        .collect();
    let src: Vec<(SChain, SChain)> = (1..max_arity)
        .map(|i| {
            (
                SChain::declare(v, &format!("{p}sr{i}"), master_rank - i as u32),
                SChain::declare(v, &format!("{p}sr{i}b"), master_rank - i as u32),
            )
        })
        .collect();
    let memb_rank = master_rank - max_arity as u32;
    Machinery {
        sent: v.tok(&format!("{p}sent"), 0),
        yes: v.tok(&format!("{p}yes"), 0),
        no: v.tok(&format!("{p}no"), 0),
        master: SChain::declare(v, &format!("{p}ml"), master_rank),
        master2: SChain::declare(v, &format!("{p}mlb"), master_rank),
        scan,
        src,
        memb_src: SChain::declare(v, &format!("{p}m2"), memb_rank),
        memb_src2: SChain::declare(v, &format!("{p}m2b"), memb_rank),
        memb_walk: SChain::declare(v, &format!("{p}m1"), memb_rank - 1),
        pos_tok: (0..max_arity.max(1))
            .map(|i| v.tok(&format!("{p}x{i}"), 0))
            .collect(),
        cand: v.tok(&format!("{p}cand"), 0),
        mx: v.tok(&format!("{p}mx"), 0),
        mz: v.tok(&format!("{p}mz"), 0),
        memb: v.tok(&format!("{p}memb"), 0),
        gflag: v.tok(&format!("{p}gf"), 0),
        aflag: v.tok(&format!("{p}af"), 0),
        found: Vec::new(),
        fargs: (0..max_arity.max(1))
            .map(|i| v.tok(&format!("{p}fa{i}"), 0))
            .collect(),
        fval: v.tok(&format!("{p}fv"), 0),
        nil: v.tok(&format!("{p}nil"), 0),
    }
}

/// One sweep: a depletion loop over `from` that per pass finds one
/// eligible entry (arguments listed; value unlisted too when `bfs_only`),
/// moves it into `to`, and appends newly seen values to the master and the
/// emitted listings.
#[allow(clippy::too_many_arguments)]
fn sweep_loop(
    m: &Machinery,
    arities: &[usize],
    from: &[FuncId],
    to: &[FuncId],
    bfs_only: bool,
    found: &[FuncId],
    listings_s: &[SChain],
    listings_p: &[PChain],
) -> Program {
    let mut pass = Vec::new();
    pass.push(set_tok(m.gflag, tv(m.no)));
    pass.push(set_tok(m.aflag, tv(m.no)));
    for fl in found {
        pass.push(set_tok(*fl, tv(m.no)));
    }
    // Membership source: the listing as of this pass.
    pass.push(m.cascade(std::slice::from_ref(&m.memb_src)));

    for (fi, f) in from.iter().enumerate() {
        let k = arities[fi];
        // Innermost test: evaluate f on the staged tuple.
        let args: Vec<Term> = (0..k).map(|i| tv(m.pos_tok[i])).collect();
        let entry = ap(*f, args.clone());
        let eligible = if bfs_only {
            Guard::Eq(tv(m.memb), tv(m.no))
        } else {
            Guard::True
        };
        let stash = {
            let mut s = vec![
                set_tok(m.gflag, tv(m.yes)),
                set_tok(found[fi], tv(m.yes)),
                set_tok(m.fval, tv(m.cand)),
            ];
            for i in 0..k {
                s.push(set_tok(m.fargs[i], tv(m.pos_tok[i])));
            }
            s.push(iff(
                Guard::Eq(tv(m.memb), tv(m.no)),
                set_tok(m.aflag, tv(m.yes)),
                noop(m.nil),
            ));
            seq(s)
        };
        let test = iff(
            Guard::And(
                Box::new(def(entry.clone())),
                Box::new(Guard::Eq(tv(m.gflag), tv(m.no))),
            ),
            seq(vec![
                set_tok(m.cand, entry),
                m.membership(),
                iff(eligible, stash, noop(m.nil)),
            ]),
            noop(m.nil),
        );
        // Nested scans, innermost first.
        let mut level = test;
        for i in (0..k).rev() {
            let chain = m.scan[i];
            let mut body = chain.pop(m.pos_tok[i]);
            body.push(level);
            let mut stmts = Vec::new();
            if i > 0 {
                // Refill this position's chain from its spawn-preserved
                // source (and rebuild the next source down, if any).
                let (src, partner) = m.src[i - 1];
                stmts.push(chain.drain(m.mx));
                stmts.extend(chain.reset(m.sent));
                stmts.extend(partner.reset(m.sent));
                let mut refill = src.pop(m.mx);
                refill.extend(partner.append(m.mx));
                refill.extend(chain.append(m.mx));
                stmts.push(dov(Guard::True, vec![src.ptr], seq(refill)));
                stmts.extend(src.reset(m.sent));
                let mut back = partner.pop(m.mx);
                back.extend(src.append(m.mx));
                stmts.push(dov(Guard::True, vec![partner.ptr], seq(back)));
            }
            stmts.push(dov(Guard::True, vec![chain.ptr], seq(body)));
            level = seq(stmts);
        }
        // Build the outermost scan chain (and the position-1 source) from
        // the master listing.
        let mut targets = vec![m.scan[0]];
        if k > 1 {
            targets.push(m.src[0].0);
        }
        if k > 0 {
            pass.push(m.cascade(&targets));
        }
        pass.push(level);
    }

    // Move the found entry and list its value if new.
    for (fi, f) in from.iter().enumerate() {
        let k = arities[fi];
        let args: Vec<Term> = (0..k).map(|i| tv(m.fargs[i])).collect();
        pass.push(iff(
            Guard::Eq(tv(found[fi]), tv(m.yes)),
            seq(vec![
                con(*f, args.clone()),
                ext(to[fi], args, tv(m.fval)),
            ]),
            noop(m.nil),
        ));
    }
    let mut appends = m.master.append(m.fval);
    for l in listings_s {
        appends.extend(l.append(m.fval));
    }
    for l in listings_p {
        appends.push(l.append(m.fval));
    }
    pass.push(iff(
        Guard::Eq(tv(m.aflag), tv(m.yes)),
        seq(appends),
        noop(m.nil),
    ));

    dov(Guard::True, from.to_vec(), seq(pass))
}

/// Assemble the full enumerate-and-move program into the caller's
/// vocabulary. `arities` is index-aligned with `spec.src_ptrs`.
pub(crate) fn build_enumerator_with(
    v: &mut VocabBuilder,
    spec: &EnumSpec,
    arities: &[usize],
) -> EnumBuilt {
    let p = spec.prefix;
    let max_arity = arities.iter().copied().max().unwrap_or(0).max(1);
    let m0 = declare_machinery(v, p, spec.top_rank, max_arity);
    let mut m = m0;
    for (i, _) in spec.src_ptrs.iter().enumerate() {
        m.found.push(v.tok(&format!("{p}fnd{i}"), 0));
    }
    let shadows: Vec<FuncId> = match &spec.dst {
        EnumDst::ShadowRestore => spec
            .src_ptrs
            .iter()
            .enumerate()
            .map(|(i, _)| v.id(&format!("{p}sh{i}"), arities[i], spec.top_rank))
            .collect(),
        EnumDst::MoveTo(ids) => ids.clone(),
    };
    let listings_s: Vec<SChain> = spec
        .listings_sentinel
        .iter()
        .map(|(name, rank)| SChain::declare(v, name, *rank))
        .collect();
    let listings_p: Vec<PChain> = spec
        .listings_proper
        .iter()
        .map(|(head, ptr, rank)| PChain::declare(v, head, ptr, *rank))
        .collect();

    let mut prog = Vec::new();
    // Anchors, flags, and token initialization.
    prog.push(set_tok_new(m.sent));
    prog.push(set_tok_new(m.yes));
    prog.push(set_tok_new(m.no));
    for t in [m.cand, m.mx, m.mz, m.fval] {
        prog.push(set_tok(t, tv(m.sent)));
    }
    for t in &m.pos_tok {
        prog.push(set_tok(*t, tv(m.sent)));
    }
    for t in &m.fargs {
        prog.push(set_tok(*t, tv(m.sent)));
    }
    for t in [m.memb, m.gflag, m.aflag] {
        prog.push(set_tok(t, tv(m.no)));
    }
    for t in &m.found {
        prog.push(set_tok(*t, tv(m.no)));
    }
    for c in [
        &m.master,
        &m.master2,
        &m.memb_src,
        &m.memb_src2,
        &m.memb_walk,
    ] {
        prog.extend(c.reset(m.sent));
    }
    for c in &m.scan {
        prog.extend(c.reset(m.sent));
    }
    for (a, b) in &m.src {
        prog.extend(a.reset(m.sent));
        prog.extend(b.reset(m.sent));
    }
    for c in &listings_s {
        prog.extend(c.reset(m.sent));
    }

    // Seed the listing with token values, deduplicated statically.
    for (i, c) in spec.src_tokens.iter().enumerate() {
        let mut g = def(tv(*c));
        for prev in &spec.src_tokens[..i] {
            g = Guard::And(Box::new(g), Box::new(Guard::ne(tv(*c), tv(*prev))));
        }
        let mut body = vec![set_tok(m.cand, tv(*c)), set_tok(m.fval, tv(*c))];
        body.extend(m.master.append(m.fval));
        for l in &listings_s {
            body.extend(l.append(m.fval));
        }
        for l in &listings_p {
            body.push(l.append(m.fval));
        }
        prog.push(iff(g, seq(body), noop(m.nil)));
    }

    // Breadth-first sweep, then (for expansion semantics) the restore
    // sweep that moves the witnesses back.
    if !spec.src_ptrs.is_empty() {
        prog.push(sweep_loop(
            &m,
            arities,
            spec.src_ptrs,
            &shadows,
            matches!(spec.dst, EnumDst::ShadowRestore),
            &m.found,
            &listings_s,
            &listings_p,
        ));
        if matches!(spec.dst, EnumDst::ShadowRestore) {
            prog.push(sweep_loop(
                &m,
                arities,
                &shadows,
                spec.src_ptrs,
                false,
                &m.found,
                &listings_s,
                &listings_p,
            ));
        }
    }

    EnumBuilt {
        prog: seq(prog),
        listings_sentinel: listings_s,
        listings_proper: listings_p,
    }
}

/// The spec-level enumerator: a unit that expands any structure over `v`
/// with a rank-0 chain `(a0, l0)` listing exactly its accessible atoms.
/// The measured identifiers are declared at the unit's top rank (their
/// relative ranking is immaterial for enumeration); the input structure is
/// preserved.
pub fn gen_enumerator(v: &Vocabulary) -> Result<(SourceUnit, TransducerSig), TransformError> {
    let mut names = Vec::new();
    for (_, d) in v.decls() {
        if d.name.starts_with("a0") || d.name.starts_with("l0") {
            return Err(TransformError::Invalid(format!(
                "identifier `{}` collides with the enumerator output names",
                d.name
            )));
        }
        names.push((d.name.clone(), d.arity));
    }
    let max_arity = names.iter().map(|(_, a)| *a).max().unwrap_or(0).max(1);
    let top = max_arity as u32 + 3;
    let mut vb = VocabBuilder::new();
    let mut src_tokens = Vec::new();
    let mut src_ptrs = Vec::new();
    let mut arities = Vec::new();
    for (name, arity) in &names {
        let id = vb.id(name, *arity, top);
        if *arity == 0 {
            src_tokens.push(id);
        } else {
            src_ptrs.push(id);
            arities.push(*arity);
        }
    }
    let spec = EnumSpec {
        prefix: "en_",
        src_tokens: &src_tokens,
        src_ptrs: &src_ptrs,
        top_rank: top,
        dst: EnumDst::ShadowRestore,
        listings_sentinel: &[],
        listings_proper: &[("a0".into(), "l0".into(), 0)],
    };
    let built = build_enumerator_with(&mut vb, &spec, &arities);
    let unit = vb.unit(built.prog);
    let sig = TransducerSig {
        inputs: names.iter().map(|(n, _)| n.clone()).collect(),
        input_rank: top,
        outputs: ENUM_OUT.iter().map(|s| s.to_string()).collect(),
        output_rank: 0,
    };
    Ok((unit, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check;
    use crate::interp::{run, ExecConfig};
    use crate::structure::{
        accessible_atoms, decode_chain, encode_numeral, free_structure, Atom, Structure, Term,
        Vocabulary,
    };

    fn listed_atoms(unit: &SourceUnit, input: &Structure) -> Vec<Atom> {
        let (out, _, _) = run(unit, input, ExecConfig::default()).unwrap();
        decode_chain(&out, "a0", "l0").unwrap()
    }

    #[test]
    fn numeral_listing_matches_accessible_atoms() {
        let input = encode_numeral(5);
        let (unit, _) = gen_enumerator(input.vocab()).unwrap();
        assert!(check(&unit).accepted(), "{:?}", check(&unit).errors);
        let listed = listed_atoms(&unit, &input);
        let set: std::collections::BTreeSet<Atom> = listed.iter().copied().collect();
        assert_eq!(set.len(), listed.len(), "no repetitions in the chain");
        assert_eq!(set, accessible_atoms(&input));
    }

    #[test]
    fn junk_entries_are_not_listed_and_survive() {
        let mut input = encode_numeral(3);
        let s = input.vocab().id("s").unwrap();
        input
            .component_mut(s)
            .insert(crate::structure::ArgTuple::from_slice(&[Atom(40)]), Atom(41));
        let (unit, _) = gen_enumerator(input.vocab()).unwrap();
        let (out, _, _) = run(&unit, &input, ExecConfig::default()).unwrap();
        let listed = decode_chain(&out, "a0", "l0").unwrap();
        assert!(!listed.contains(&Atom(40)));
        assert!(!listed.contains(&Atom(41)));
        // Expansion: the input survives, junk included.
        let back = out.reduct(input.vocab()).unwrap();
        assert_eq!(back, input);
    }

    #[test]
    fn binary_tree_listing_is_monotone() {
        let vocab = Vocabulary::unranked([("r", 0), ("p", 2)]).unwrap();
        let r = vocab.id("r").unwrap();
        let p = vocab.id("p").unwrap();
        let prr = Term::App(p, vec![Term::token(r), Term::token(r)]);
        let t = Term::App(p, vec![prr.clone(), prr.clone()]);
        let input = free_structure(&t, &vocab).unwrap();
        let (unit, _) = gen_enumerator(input.vocab()).unwrap();
        assert!(check(&unit).accepted(), "{:?}", check(&unit).errors);
        let listed = listed_atoms(&unit, &input);
        let set: std::collections::BTreeSet<Atom> = listed.iter().copied().collect();
        assert_eq!(set, accessible_atoms(&input));
        // Monotone: every entry's arguments appear before its value.
        let pos =
            |a: Atom| -> usize { listed.iter().position(|x| *x == a).expect("listed") };
        for (_, f) in input.components() {
            for (args, val) in f.entries() {
                for a in args.iter() {
                    assert!(pos(*a) < pos(val), "argument listed after value");
                }
            }
        }
    }

    #[test]
    fn tokens_only_structures_list_token_values() {
        let vocab = Vocabulary::unranked([("c", 0), ("d", 0), ("f", 1)]).unwrap();
        let mut input = Structure::empty(vocab);
        let c = input.vocab().id("c").unwrap();
        let d = input.vocab().id("d").unwrap();
        input.component_mut(c).insert(Default::default(), Atom(7));
        input.component_mut(d).insert(Default::default(), Atom(7));
        let (unit, _) = gen_enumerator(input.vocab()).unwrap();
        let listed = listed_atoms(&unit, &input);
        assert_eq!(listed, vec![Atom(7)]);
    }
}
