"""Interactive machines and the simulation scheduler.

A machine strategy plays the TOP side as a deterministic function of the run
tape: given the full history it either grants permission (empty answer) or
produces the block of moves it wants to make now.  EPM-disciplined machines
may emit at most one move per query; BMEPM machines may emit any finite
block.  Environments answer grants with zero or more BOT moves and are
likewise pure functions of (history, grant number), so every simulation is
replayable bit for bit.

The translator and router bases below implement "imaginary play": an outer
machine re-derives the inner machine's whole session from its own history by
replaying translated environment moves, then emits whatever translated inner
moves are not on the real tape yet.  Incremental caches keep the replay
linear per new event; behaviorally everything remains a pure function of the
history (a cache miss falls back to a full replay with identical output).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from random import Random
from typing import Callable, Iterable, Sequence

from .kernel import (
    BOT,
    TOP,
    GameExpr,
    Interpretation,
    Labmove,
    Run,
    legal_extension,
)
from . import kernel
from .syntax import And, Atom, CCoRec, CRec, NegAtom, OldCCoRec, OldCRec, Or, UCoRec, URec


class DisciplineError(RuntimeError):
    """An EPM-declared machine emitted a multi-move block."""


class MachineStrategy:
    """Deterministic transducer for the TOP player."""

    discipline = "BMEPM"  # or "EPM"
    name = "machine"

    def next_moves(self, history: Run) -> tuple[str, ...]:
        """Moves to make now; empty means grant permission."""
        raise NotImplementedError

    def fresh(self) -> "MachineStrategy":
        """An independent copy with pristine caches."""
        return copy.deepcopy(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _emitted(history: Run) -> list[str]:
    return [lm.move for lm in history if lm.player is TOP]


class DueMachine(MachineStrategy):
    """Base for strategies that owe a response sequence to the environment
    moves seen so far.

    Subclasses provide a fold: ``initial_state`` plus ``respond(state, lm)``
    returning the moves owed because of one environment labmove (mutating the
    state as needed).  The owed sequence is accumulated incrementally; the
    moves already on the tape must form a prefix of it, and the remainder is
    emitted (first move only under EPM discipline).
    """

    def __init__(self):
        self._seen = 0
        self._prefix: Run = ()
        self._due: list[str] = []
        self._emitted = 0
        self._fold = self.initial_state()

    def initial_state(self):
        return None

    def respond(self, state, lm: Labmove) -> list[str]:
        raise NotImplementedError

    def due_moves(self, history: Run) -> list[str]:
        """The full owed sequence after ``history`` (recomputed cold)."""
        state = self.initial_state()
        due: list[str] = []
        for lm in history:
            if lm.player is BOT:
                due.extend(self.respond(state, lm))
        return due

    def next_moves(self, history: Run) -> tuple[str, ...]:
        if self._seen > len(history) or history[: self._seen] != self._prefix:
            DueMachine.__init__(self)
        for lm in history[self._seen:]:
            if lm.player is BOT:
                self._due.extend(self.respond(self._fold, lm))
            else:
                self._emitted += 1
        self._seen = len(history)
        self._prefix = history
        if self._emitted > len(self._due):
            raise RuntimeError(f"{self.name}: tape out of sync with strategy")
        pending = self._due[self._emitted:]
        if not pending:
            return ()
        return (pending[0],) if self.discipline == "EPM" else tuple(pending)


class SilentMachine(DueMachine):
    """Grants permission forever."""

    name = "silent"
    discipline = "EPM"

    def respond(self, state, lm):
        return []


class Environment:
    """Deterministic BOT-side responder, invoked only on grants."""

    name = "environment"

    def on_grant(self, history: Run, grant_no: int) -> tuple[str, ...]:
        raise NotImplementedError

    def fresh(self) -> "Environment":
        return copy.deepcopy(self)


class SilentEnvironment(Environment):
    name = "silent-env"

    def on_grant(self, history, grant_no):
        return ()


def scripted_environment(script: Iterable[tuple[int, Sequence[str] | str]]) -> Environment:
    """Replay fixed moves at fixed grant numbers (1-based)."""
    table: dict[int, tuple[str, ...]] = {}
    for grant_no, moves in script:
        if isinstance(moves, str):
            moves = (moves,)
        table.setdefault(grant_no, ())
        table[grant_no] = table[grant_no] + tuple(moves)

    class Scripted(Environment):
        name = "scripted"

        def on_grant(self, history, grant_no):
            return table.get(grant_no, ())

    return Scripted()


# ---------------------------------------------------------------------------
# scheduler


@dataclass
class SimConfig:
    """Scheduling parameters.

    ``fairness`` forces a grant at least every k cycles, a finite surrogate
    for fair computation branches.  ``flush`` lets the machine play out its
    pending answers after the last cycle so that winners are judged at a
    quiescent point rather than mid-exchange.
    """

    horizon: int = 200
    fairness: int = 8
    flush: bool = True

    def __post_init__(self):
        if self.horizon < 1 or self.fairness < 1:
            raise ValueError("horizon and fairness must be >= 1")


@dataclass(frozen=True)
class TraceEvent:
    cycle: int
    actor: str  # "machine" | "env" | "scheduler"
    kind: str  # "move" | "grant" | "forced-grant"
    move: str | None = None


@dataclass
class SimResult:
    run: Run
    trace: list[TraceEvent]
    grants: int

    def transcript(self) -> str:
        return kernel.format_run(self.run)

    def trace_lines(self) -> str:
        out = []
        for ev in self.trace:
            if ev.kind == "move":
                label = "T" if ev.actor == "machine" else "B"
                out.append(f"{ev.cycle} {label} {ev.move}")
            else:
                out.append(f"{ev.cycle} {ev.kind}")
        return "\n".join(out)


def simulate(machine: MachineStrategy, env: Environment, cfg: SimConfig) -> SimResult:
    """Run the query loop: ask the machine each cycle; on a grant, ask the
    environment.  Machine moves of a cycle precede environment moves of the
    same (forced-grant) cycle."""
    machine = machine.fresh()
    env = env.fresh()
    history: list[Labmove] = []
    trace: list[TraceEvent] = []
    grants = 0
    since_grant = 0

    def do_grant(cycle: int, forced: bool):
        nonlocal grants, since_grant
        grants += 1
        since_grant = 0
        trace.append(TraceEvent(cycle, "scheduler" if forced else "machine",
                                "forced-grant" if forced else "grant"))
        for mv in env.on_grant(tuple(history), grants):
            history.append(Labmove(BOT, mv))
            trace.append(TraceEvent(cycle, "env", "move", mv))

    granted_at = -1  # history length at the machine's last grant
    for cycle in range(1, cfg.horizon + 1):
        if granted_at == len(history):
            # deterministic machine, unchanged tape: it grants again
            do_grant(cycle, forced=False)
            continue
        block = machine.next_moves(tuple(history))
        if block:
            if machine.discipline == "EPM" and len(block) > 1:
                raise DisciplineError(
                    f"{machine.name} declared EPM but emitted a block of {len(block)}"
                )
            for mv in block:
                history.append(Labmove(TOP, mv))
                trace.append(TraceEvent(cycle, "machine", "move", mv))
            since_grant += 1
            if since_grant >= cfg.fairness:
                do_grant(cycle, forced=True)
        else:
            granted_at = len(history)
            do_grant(cycle, forced=False)

    if cfg.flush:
        cycle = cfg.horizon
        for _ in range(cfg.horizon):
            block = machine.next_moves(tuple(history))
            if not block:
                break
            cycle += 1
            for mv in block:
                history.append(Labmove(TOP, mv))
                trace.append(TraceEvent(cycle, "machine", "move", mv))

    return SimResult(tuple(history), trace, grants)


# ---------------------------------------------------------------------------
# random environments


def _move_candidates(g: GameExpr, itp: Interpretation, pos: Run, rng: Random) -> list[str]:
    """Plausibly legal BOT moves: shape-directed templates over small address
    pools and the atoms' suggestion lists.  Candidates carry no legality
    promise; callers filter with legal_extension."""
    match g:
        case Atom(name) | NegAtom(name):
            return list(itp[name].suggest(()))
        case And(l, r) | Or(l, r):
            out = [
                f"1.{c}"
                for c in _move_candidates(l, itp, kernel.strip_prefix(pos, "1."), rng)
            ]
            out += [
                f"2.{c}"
                for c in _move_candidates(r, itp, kernel.strip_prefix(pos, "2."), rng)
            ]
            return out
        case CRec(body) | CCoRec(body) | URec(body) | UCoRec(body):
            addrs = ["", "0", "1", format(rng.randrange(8), "03b")]
            inner = _move_candidates(body, itp, pos, rng)
            return [f"{w}.{c}" for w in addrs for c in inner]
        case OldCRec(body) | OldCCoRec(body):
            tree = kernel.bt_structure(pos)
            out = []
            if isinstance(g, OldCRec):  # BOT is the replicating player here
                out += [f"{leaf}:" for leaf in tree.leaves()]
            inner = _move_candidates(body, itp, pos, rng)
            for w in sorted(tree.nodes, key=lambda u: (len(u), u))[:6]:
                out.extend(f"{w}.{c}" for c in inner)
            return out
        case kernel.CirquentGame(c):
            n = len(c.overgroups)
            out = []
            for a in range(1, len(c.oformulas) + 1):
                coords = tuple(
                    rng.choice(["", "0", "1", "00"]) if a in c.overgroups[j - 1] else ""
                    for j in range(1, n + 1)
                )
                for cnd in _move_candidates(c.oformulas[a - 1], itp, pos, rng):
                    out.append(kernel.join_cell(a, coords, cnd))
            return out
    raise TypeError(f"not a game expression: {g!r}")


def random_legal_environment(
    seed: int, g: GameExpr, itp: Interpretation, move_probability: float = 0.5
) -> Environment:
    """On each grant, with the given probability play one uniformly chosen
    legal move from the candidate pool, else pass.  Pure per (seed, grant)."""

    class RandomLegal(Environment):
        name = f"random:{seed}"

        def on_grant(self, history, grant_no):
            rng = Random(f"{seed}:{grant_no}")
            if rng.random() >= move_probability:
                return ()
            pool = _move_candidates(g, itp, history, rng)
            rng.shuffle(pool)
            for mv in pool:
                if legal_extension(g, itp, history, Labmove(BOT, mv)):
                    return (mv,)
            return ()

    return RandomLegal()


# ---------------------------------------------------------------------------
# translators: one inner machine behind a move renaming


class _ReplayState:
    __slots__ = ("seen", "emitted", "imag", "inner_tops", "translated", "out", "prefix")

    def __init__(self):
        self.seen = 0  # real history events processed
        self.emitted = 0  # our own moves among them
        self.imag: list[Labmove] = []  # reconstructed inner tape
        self.inner_tops: list[str] = []  # the inner machine's moves, in order
        self.translated = 0  # inner TOP moves already pushed through inner_to_real
        self.out: list[str] = []  # real moves owed, in emission order
        self.prefix: Run = ()  # the history those events came from


class Translator(MachineStrategy):
    """Plays game B by simulating an inner machine on game A.

    Environment moves translate one-to-many onto the inner tape; inner moves
    translate one-to-many onto the real tape.  Each inner move is translated
    exactly once, at the moment it first becomes due, against a context
    derived from the real play so far (transformers whose renaming depends on
    the addresses already played use that context).
    """

    def __init__(self, inner: MachineStrategy, name: str | None = None):
        self.inner = inner
        if name:
            self.name = name
        self._state = _ReplayState()

    # -- renaming hooks ----------------------------------------------------

    def env_to_inner(self, move: str) -> list[str]:
        raise NotImplementedError

    def inner_to_real(self, move: str, ctx) -> list[str]:
        raise NotImplementedError

    def make_out_context(self, history: Run):
        """Context consulted by inner_to_real; rebuilt per translation round."""
        return None

    def note_real_move(self, ctx, move: str) -> None:
        """Update the context with a move about to join the real tape."""

    # -- replay ------------------------------------------------------------

    def _drain_inner(self, state: _ReplayState):
        while True:
            block = self.inner.next_moves(tuple(state.imag))
            if not block:
                return
            state.imag.extend(Labmove(TOP, mv) for mv in block)
            state.inner_tops.extend(block)

    def next_moves(self, history: Run) -> tuple[str, ...]:
        state = self._state
        if state.seen > len(history) or history[: state.seen] != state.prefix:
            state = self._state = _ReplayState()
            self.inner = self.inner.fresh()
        if state.seen == 0:
            self._drain_inner(state)
        for lm in history[state.seen:]:
            if lm.player is BOT:
                state.imag.extend(Labmove(BOT, mv) for mv in self.env_to_inner(lm.move))
                self._drain_inner(state)
            else:
                state.emitted += 1
        state.seen = len(history)
        state.prefix = history
        if state.translated < len(state.inner_tops):
            ctx = self.make_out_context(history)
            for mv in state.out[state.emitted:]:
                self.note_real_move(ctx, mv)  # owed but not on the tape yet
            for mv in state.inner_tops[state.translated:]:
                for real in self.inner_to_real(mv, ctx):
                    state.out.append(real)
                    self.note_real_move(ctx, real)
            state.translated = len(state.inner_tops)
        if state.emitted > len(state.out):
            raise RuntimeError(f"{self.name}: tape out of sync")
        out = tuple(state.out[state.emitted:])
        if self.discipline == "EPM":
            return out[:1]
        return out


class RenamingMachine(Translator):
    """Translator specialized to stateless bijective-ish renamings."""

    def __init__(self, inner, to_inner: Callable[[str], list[str]],
                 to_real: Callable[[str], list[str]], name=None):
        super().__init__(inner, name)
        self._to_inner = to_inner
        self._to_real = to_real

    def env_to_inner(self, move):
        return self._to_inner(move)

    def inner_to_real(self, move, ctx):
        return self._to_real(move)


# ---------------------------------------------------------------------------
# routers: several inner machines wired together


class Router(MachineStrategy):
    """Plays an outer game by routing moves among inner machines.

    ``outer_links`` are (outer_prefix, inner index, inner_prefix): a BOT move
    under outer_prefix feeds the inner tape under inner_prefix, and an inner
    TOP move under inner_prefix surfaces as a real move under outer_prefix.
    ``internal_links`` are (i, prefix_i, j, prefix_j): a TOP move of machine i
    under prefix_i lands on machine j's tape as a BOT move under prefix_j,
    and symmetrically.
    """

    def __init__(self, inners, outer_links, internal_links, name="router"):
        self.inners = list(inners)
        self.outer_links = list(outer_links)
        self.internal_links = list(internal_links)
        self.name = name
        self._reset()

    def _reset(self):
        self._seen = 0
        self._prefix: Run = ()
        self._tapes: list[list[Labmove]] = [[] for _ in self.inners]
        self._out: list[str] = []

    def _route_inner_move(self, i: int, move: str):
        for a, pa, b, pb in self.internal_links:
            if a == i and move.startswith(pa):
                self._tapes[b].append(Labmove(BOT, pb + move[len(pa):]))
                return b
            if b == i and move.startswith(pb):
                self._tapes[a].append(Labmove(BOT, pa + move[len(pb):]))
                return a
        for outer_prefix, j, inner_prefix in self.outer_links:
            if j == i and move.startswith(inner_prefix):
                self._out.append(outer_prefix + move[len(inner_prefix):])
                return None
        return None

    def _settle(self):
        progress = True
        while progress:
            progress = False
            for i, machine in enumerate(self.inners):
                block = machine.next_moves(tuple(self._tapes[i]))
                if block:
                    progress = True
                    for mv in block:
                        self._tapes[i].append(Labmove(TOP, mv))
                        self._route_inner_move(i, mv)

    def next_moves(self, history: Run) -> tuple[str, ...]:
        if self._seen > len(history) or history[: self._seen] != self._prefix:
            self.inners = [m.fresh() for m in self.inners]
            self._reset()
        if self._seen == 0:
            self._settle()
        for lm in history[self._seen:]:
            if lm.player is BOT:
                for outer_prefix, j, inner_prefix in self.outer_links:
                    if lm.move.startswith(outer_prefix):
                        self._tapes[j].append(
                            Labmove(BOT, inner_prefix + lm.move[len(outer_prefix):])
                        )
                        break
                self._settle()
        self._seen = len(history)
        self._prefix = history
        done = _emitted(history)
        if self._out[: len(done)] != done:
            raise RuntimeError(f"{self.name}: tape out of sync")
        return tuple(self._out[len(done):])


def compose_modus_ponens(n: MachineStrategy, m: MachineStrategy,
                         name="modus-ponens") -> MachineStrategy:
    """From n winning A -> B and m winning A, a machine playing B.

    m's moves feed n's left component with roles flipped; n's left-component
    moves feed m; n's right-component moves are played for real.
    """
    return Router(
        inners=[n.fresh(), m.fresh()],
        outer_links=[("", 0, "2.")],
        internal_links=[(0, "1.", 1, "")],
        name=name,
    )


def compose_chain(m_ab: MachineStrategy, m_bc: MachineStrategy,
                  name="chain") -> MachineStrategy:
    """From machines winning A -> B and B -> C, a machine playing A -> C."""
    return Router(
        inners=[m_ab.fresh(), m_bc.fresh()],
        outer_links=[("1.", 0, "1."), ("2.", 1, "2.")],
        internal_links=[(0, "2.", 1, "1.")],
        name=name,
    )


def swap_components(m: MachineStrategy, name="swap") -> MachineStrategy:
    """Plays the component-swapped disjunction: wins B | A from A | B."""
    return Router(
        inners=[m.fresh()],
        outer_links=[("1.", 0, "2."), ("2.", 0, "1.")],
        internal_links=[],
        name=name,
    )


def pair_components(m1: MachineStrategy, m2: MachineStrategy,
                    name="pair") -> MachineStrategy:
    """Lift machines for A -> A' and B -> B' to one for the componentwise
    implication (A op B) -> (A' op B), both for op = conjunction and
    disjunction: the move renaming is the same, only winners differ."""
    return Router(
        inners=[m1.fresh(), m2.fresh()],
        outer_links=[
            ("1.1.", 0, "1."),
            ("2.1.", 0, "2."),
            ("1.2.", 1, "1."),
            ("2.2.", 1, "2."),
        ],
        internal_links=[],
        name=name,
    )
