//! Window passes compiled into finite-state transducers.
//!
//! A transducer state is the pending window prefix: the `w - 1` cells that
//! have been read (and possibly rewritten) but not yet emitted. Reading one
//! symbol completes the window, applies the pass's rule, emits the oldest
//! cell and keeps the rest. The machine starts from an all-zero prefix, so
//! its first `w - 1` emissions are padding and are dropped; finalization
//! flushes the pending cells (running stage-1 cleanup first).
//!
//! Because each step is a function `state -> state` chosen by the input
//! symbol, the state before every position can also be found by composing
//! those functions in a balanced tree: `run_parallel_prefix` does exactly
//! that and emits the same output as `run_scan`.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::adder;
use crate::error::{contract, invariant, Result};
use crate::rules::{prelim_boundary_rule, prelim_rule, stage1_cleanup, stage1_rule, stage2_rule, UNKNOWN};
use crate::seq::{TernSeq, WorkSeq};
use crate::signed;
use crate::trace::PassId;
use crate::tree::ceil_log2;

pub const MAX_STATES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

pub type StateId = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub next: StateId,
    pub emit: i8,
    /// Whether the pass rule fired on this window.
    pub fired: bool,
}

/// Trailing output of a state when the input ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finish {
    Flush { tail: Vec<i8>, cleanups: usize },
    Reject(String),
}

#[derive(Debug, Clone)]
pub struct Transducer {
    pass: PassId,
    direction: Direction,
    width: usize,
    input_alphabet: Vec<i8>,
    output_alphabet: Vec<i8>,
    /// Pending window prefix of every live state; the reject state is
    /// `states.len()`.
    states: Vec<Vec<i8>>,
    /// `table[state * input_alphabet.len() + symbol_index]`.
    table: Vec<Transition>,
    finals: Vec<Finish>,
    /// Per input symbol, the state map `state -> next`.
    columns: Vec<Vec<StateId>>,
}

impl Transducer {
    pub fn pass(&self) -> PassId {
        self.pass
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn input_alphabet(&self) -> &[i8] {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &[i8] {
        &self.output_alphabet
    }

    /// Live (pending-prefix) states, not counting the reject state.
    pub fn pending_states(&self) -> usize {
        self.states.len()
    }

    /// All states, reject included.
    pub fn state_count(&self) -> usize {
        self.states.len() + 1
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn reject(&self) -> StateId {
        self.states.len() as StateId
    }

    pub fn pending(&self, state: StateId) -> Option<&[i8]> {
        self.states.get(state as usize).map(Vec::as_slice)
    }

    fn symbol_index(&self, sym: i8) -> Option<usize> {
        self.input_alphabet.iter().position(|&a| a == sym)
    }

    pub fn step(&self, state: StateId, sym_index: usize) -> Transition {
        self.table[state as usize * self.input_alphabet.len() + sym_index]
    }

    pub fn finish(&self, state: StateId) -> &Finish {
        &self.finals[state as usize]
    }
}

/// Rule application for one completed window, in the transducer's reading
/// order. `None` means the window leaves the pass alphabet.
type WindowFn = fn(&mut [i8]) -> Option<Option<&'static str>>;
type FinishFn = fn(&[i8]) -> std::result::Result<(Vec<i8>, usize), String>;

struct PassRules {
    direction: Direction,
    width: usize,
    input: Vec<i8>,
    output: Vec<i8>,
    window: WindowFn,
    finish: FinishFn,
}

fn stage1_window(w: &mut [i8]) -> Option<Option<&'static str>> {
    let mut cells = [w[0] as u8, w[1] as u8, w[2] as u8, w[3] as u8];
    let fired = stage1_rule(&mut cells);
    if cells[3] > 3 {
        return None;
    }
    for (dst, src) in w.iter_mut().zip(cells) {
        *dst = src as i8;
    }
    Some(fired)
}

fn stage1_finish(pending: &[i8]) -> std::result::Result<(Vec<i8>, usize), String> {
    let mut cells = [UNKNOWN, pending[0] as u8, pending[1] as u8, pending[2] as u8];
    let steps = stage1_cleanup(&mut cells)?;
    Ok((cells[1..].iter().map(|&d| d as i8).collect(), steps.len()))
}

fn stage2_lr_window(w: &mut [i8]) -> Option<Option<&'static str>> {
    let mut cells = [w[0] as u8, w[1] as u8, w[2] as u8];
    let fired = stage2_rule(&mut cells);
    for (dst, src) in w.iter_mut().zip(cells) {
        *dst = src as i8;
    }
    Some(fired)
}

// reads the sequence reversed, so the window arrives mirrored
fn stage2_rl_window(w: &mut [i8]) -> Option<Option<&'static str>> {
    let mut cells = [w[2] as u8, w[1] as u8, w[0] as u8];
    let fired = stage2_rule(&mut cells);
    w[0] = cells[2] as i8;
    w[1] = cells[1] as i8;
    w[2] = cells[0] as i8;
    Some(fired)
}

fn flush(pending: &[i8]) -> std::result::Result<(Vec<i8>, usize), String> {
    Ok((pending.to_vec(), 0))
}

fn prelim_window(w: &mut [i8]) -> Option<Option<&'static str>> {
    let mut cells = [w[0], w[1], w[2]];
    let fired = prelim_rule(&mut cells);
    w.copy_from_slice(&cells);
    Some(fired)
}

fn prelim_finish(pending: &[i8]) -> std::result::Result<(Vec<i8>, usize), String> {
    let mut tail = [pending[0], pending[1]];
    let mut cleanups = 0;
    if tail[1] < 0 && prelim_boundary_rule(&mut tail).is_some() {
        cleanups = 1;
    }
    if tail.iter().any(|&d| d < 0) {
        return Err("uncovered preliminary-pass window at the right end".into());
    }
    Ok((tail.to_vec(), cleanups))
}

fn rules_for(pass: PassId) -> PassRules {
    match pass {
        PassId::Stage1 => PassRules {
            direction: Direction::LeftToRight,
            width: 4,
            input: vec![0, 1, 2, 3],
            output: vec![0, 1],
            window: stage1_window,
            finish: stage1_finish,
        },
        PassId::Stage2Rl => PassRules {
            direction: Direction::RightToLeft,
            width: 3,
            input: vec![0, 1],
            output: vec![0, 1],
            window: stage2_rl_window,
            finish: flush,
        },
        PassId::Stage2Lr => PassRules {
            direction: Direction::LeftToRight,
            width: 3,
            input: vec![0, 1],
            output: vec![0, 1],
            window: stage2_lr_window,
            finish: flush,
        },
        PassId::SignedPrelim => PassRules {
            direction: Direction::LeftToRight,
            width: 3,
            input: vec![-1, 0, 1],
            output: vec![0, 1, 2],
            window: prelim_window,
            finish: prelim_finish,
        },
    }
}

/// Builds the transducer for a pass by exploring every pending prefix
/// reachable from the all-zero one.
pub fn compile_pass(pass: PassId) -> Result<Transducer> {
    let rules = rules_for(pass);
    let k = rules.input.len();
    let mut ids: HashMap<Vec<i8>, usize> = HashMap::new();
    let mut states: Vec<Vec<i8>> = vec![vec![0; rules.width - 1]];
    ids.insert(states[0].clone(), 0);
    // next state as `None` for reject, resolved once the count is known
    let mut raw: Vec<(Option<usize>, i8, bool)> = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        let pending = states[cursor].clone();
        for &sym in &rules.input {
            let mut window = pending.clone();
            window.push(sym);
            let entry = match (rules.window)(&mut window) {
                Some(fired) if rules.output.contains(&window[0]) => {
                    let rest = window[1..].to_vec();
                    let next = match ids.get(&rest) {
                        Some(&id) => id,
                        None => {
                            let id = states.len();
                            if id + 1 >= MAX_STATES {
                                return Err(invariant(format!("{pass} transducer exceeds {MAX_STATES} states")));
                            }
                            ids.insert(rest.clone(), id);
                            states.push(rest);
                            id
                        }
                    };
                    (Some(next), window[0], fired.is_some())
                }
                _ => (None, 0, false),
            };
            raw.push(entry);
        }
        cursor += 1;
    }
    let reject = states.len() as StateId;
    let mut table: Vec<Transition> = raw
        .into_iter()
        .map(|(next, emit, fired)| Transition { next: next.map_or(reject, |n| n as StateId), emit, fired })
        .collect();
    table.extend(std::iter::repeat_n(Transition { next: reject, emit: 0, fired: false }, k));
    let mut finals: Vec<Finish> = states
        .iter()
        .map(|p| match (rules.finish)(p) {
            Ok((tail, cleanups)) if tail.iter().all(|d| rules.output.contains(d)) => Finish::Flush { tail, cleanups },
            Ok((tail, _)) => Finish::Reject(format!("final window {tail:?} leaves the output alphabet")),
            Err(e) => Finish::Reject(e),
        })
        .collect();
    finals.push(Finish::Reject("rejected earlier".into()));
    let total = states.len() + 1;
    let columns = (0..k).map(|c| (0..total).map(|s| table[s * k + c].next).collect()).collect();
    Ok(Transducer {
        pass,
        direction: rules.direction,
        width: rules.width,
        input_alphabet: rules.input,
        output_alphabet: rules.output,
        states,
        table,
        finals,
        columns,
    })
}

/// Compiled transducers, built once per process.
pub fn compiled(pass: PassId) -> &'static Transducer {
    static CACHE: [OnceLock<Transducer>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = PassId::ALL.iter().position(|&p| p == pass).expect("known pass");
    CACHE[slot].get_or_init(|| compile_pass(pass).expect("rule tables compile within the state bound"))
}

/// Exact work and depth accounting of one transducer run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostReport {
    pub pass: PassId,
    pub n: usize,
    /// Window placements of the equivalent direct pass, `n - w + 1`.
    pub placements: usize,
    pub firings: usize,
    pub cleanups: usize,
    /// Transitions executed, one per input symbol.
    pub transitions: usize,
    /// State-map compositions (parallel prefix only).
    pub compositions: usize,
    /// Composition-tree height (parallel prefix only).
    pub tree_height: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: Vec<i8>,
    pub cost: CostReport,
}

pub fn cost_report(run: &Run) -> CostReport {
    run.cost
}

/// Input symbols in reading order, as alphabet indices.
fn encode(t: &Transducer, s: &[i8]) -> Result<Vec<usize>> {
    if s.len() < t.width {
        return Err(contract(format!("{} needs at least {} digits, got {}", t.pass, t.width, s.len())));
    }
    let mut idx = Vec::with_capacity(s.len());
    for (i, &d) in s.iter().enumerate() {
        match t.symbol_index(d) {
            Some(c) => idx.push(c),
            None => return Err(contract(format!("digit {d} at offset {i} outside the {} alphabet", t.pass))),
        }
    }
    if t.direction == Direction::RightToLeft {
        idx.reverse();
    }
    Ok(idx)
}

/// Drops the padding emissions, appends the finalization tail and restores
/// the caller's orientation.
fn assemble(t: &Transducer, mut emitted: Vec<i8>, last: StateId, at: usize) -> Result<(Vec<i8>, usize)> {
    if last == t.reject() {
        return Err(invariant(format!("{} transducer rejected its input at symbol {at}", t.pass)));
    }
    let pad = t.width - 1;
    if emitted[..pad].iter().any(|&d| d != 0) {
        return Err(contract(format!("{} input rewrites the leading padding; it must begin with zeros", t.pass)));
    }
    let cleanups = match t.finish(last) {
        Finish::Flush { tail, cleanups } => {
            emitted.extend_from_slice(tail);
            *cleanups
        }
        Finish::Reject(why) => return Err(invariant(format!("{} transducer: {why}", t.pass))),
    };
    emitted.drain(..pad);
    if t.direction == Direction::RightToLeft {
        emitted.reverse();
    }
    Ok((emitted, cleanups))
}

/// One transition per input symbol, then finalization.
pub fn run_scan(t: &Transducer, s: &[i8]) -> Result<Run> {
    let input = encode(t, s)?;
    let n = input.len();
    let mut state = t.initial();
    let mut emitted = Vec::with_capacity(n + t.width);
    let mut firings = 0;
    for (i, &c) in input.iter().enumerate() {
        let tr = t.step(state, c);
        if tr.next == t.reject() {
            return Err(invariant(format!("{} transducer rejected its input at symbol {i}", t.pass)));
        }
        emitted.push(tr.emit);
        firings += tr.fired as usize;
        state = tr.next;
    }
    let (output, cleanups) = assemble(t, emitted, state, n)?;
    let cost = CostReport {
        pass: t.pass,
        n,
        placements: n + 1 - t.width,
        firings,
        cleanups,
        transitions: n,
        compositions: 0,
        tree_height: None,
    };
    Ok(Run { output, cost })
}

fn compose(first: &[StateId], then: &[StateId]) -> Vec<StateId> {
    first.iter().map(|&s| then[s as usize]).collect()
}

/// Same output as [`run_scan`], with the state before every symbol found by
/// a balanced up-sweep of state-map compositions followed by a down-sweep.
/// Each level is split into tasks of `chunk` nodes that may run in parallel;
/// the tree shape never depends on `chunk`.
pub fn run_parallel_prefix(t: &Transducer, s: &[i8], chunk: usize) -> Result<Run> {
    if chunk == 0 {
        return Err(contract("chunk size must be at least 1"));
    }
    let input = encode(t, s)?;
    let n = input.len();

    // up-sweep: levels[0] are the per-symbol maps, borrowed from the table
    let leaf = |i: usize| t.columns[input[i]].as_slice();
    let mut levels: Vec<Vec<Vec<StateId>>> = Vec::new();
    let mut compositions = 0;
    let mut width = n;
    while width > 1 {
        let parents = width.div_ceil(2);
        let below = levels.last();
        let node = |j: usize| -> &[StateId] {
            match below {
                None => leaf(j),
                Some(l) => l[j].as_slice(),
            }
        };
        let build = |j: usize| {
            if 2 * j + 1 < width {
                compose(node(2 * j), node(2 * j + 1))
            } else {
                node(2 * j).to_vec()
            }
        };
        let level: Vec<Vec<StateId>> = (0..parents).into_par_iter().with_min_len(chunk).map(build).collect();
        compositions += width / 2;
        levels.push(level);
        width = parents;
    }
    let height = levels.len();

    // down-sweep: state entering each node, root first
    let mut entering: Vec<StateId> = vec![t.initial()];
    for depth in (0..height).rev() {
        let child_count = if depth == 0 { n } else { levels[depth - 1].len() };
        let child = |j: usize| -> &[StateId] {
            if depth == 0 {
                leaf(j)
            } else {
                levels[depth - 1][j].as_slice()
            }
        };
        let parent = &entering;
        entering = (0..child_count)
            .into_par_iter()
            .with_min_len(chunk)
            .map(|j| {
                let s = parent[j / 2];
                if j % 2 == 0 {
                    s
                } else {
                    child(j - 1)[s as usize]
                }
            })
            .collect();
    }

    let steps: Vec<Transition> =
        input.par_iter().with_min_len(chunk).zip(entering.par_iter()).map(|(&c, &s)| t.step(s, c)).collect();
    if let Some(i) = steps.iter().position(|tr| tr.next == t.reject()) {
        return Err(invariant(format!("{} transducer rejected its input at symbol {i}", t.pass)));
    }
    let last = steps.last().map_or(t.initial(), |tr| tr.next);
    let firings = steps.iter().filter(|tr| tr.fired).count();
    let emitted = steps.into_iter().map(|tr| tr.emit).collect();
    let (output, cleanups) = assemble(t, emitted, last, n)?;
    debug_assert_eq!(height, ceil_log2(n));
    let cost = CostReport {
        pass: t.pass,
        n,
        placements: n + 1 - t.width,
        firings,
        cleanups,
        transitions: n,
        compositions,
        tree_height: Some(height),
    };
    Ok(Run { output, cost })
}

/// The direct window pass on the same digits, for comparison with a
/// transducer run. Stage 2 left-to-right is returned unstripped.
pub fn direct_pass(pass: PassId, s: &[i8]) -> Result<Vec<i8>> {
    let work = || -> Result<WorkSeq> {
        if let Some(&d) = s.iter().find(|&&d| !(0..=3).contains(&d)) {
            return Err(contract(format!("digit {d} outside the working alphabet")));
        }
        Ok(WorkSeq::from_vec(s.iter().map(|&d| d as u8).collect()))
    };
    let widen = |w: WorkSeq| w.into_digits().into_iter().map(|d| d as i8).collect();
    match pass {
        PassId::Stage1 => adder::stage1_eliminate(work()?).map(widen),
        PassId::Stage2Rl => adder::stage2_right_to_left(work()?).map(widen),
        PassId::Stage2Lr => {
            let (out, _) = adder::stage2_left_to_right_unstripped(work()?, false)?;
            if let Some(v) = crate::seq::canonical_violation(out.digits().trim_leading_zeros()) {
                return Err(invariant(format!("left-to-right pass output not canonical: {v}")));
            }
            Ok(widen(out))
        }
        PassId::SignedPrelim => signed::preliminary_pass(&TernSeq::new(s.to_vec())?).map(widen),
    }
}

trait TrimLeadingZeros {
    fn trim_leading_zeros(&self) -> &Self;
}

impl TrimLeadingZeros for [u8] {
    fn trim_leading_zeros(&self) -> &[u8] {
        let lead = self.iter().take_while(|&&d| d == 0).count();
        &self[lead..]
    }
}
