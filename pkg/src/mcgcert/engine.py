"""Derivation certificates: replay, reporting, and bounded search.

The working expression of a certificate is a literal letter sequence.
``insert`` puts a cancelling pair into it, ``apply`` rewrites a factor at
an exact offset, and ``regroup`` performs free reduction (optionally to a
stated, freely equal form). A certificate passes when the freely reduced
final expression equals its target.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import dsl
from .words import Letter, McgError, Word, invert_letters, reduce_letters, render_letters


class StepError(McgError):
    reason = "StepError"


class NoMatchAtPosition(StepError):
    reason = "NoMatchAtPosition"


class UnknownRelation(StepError):
    reason = "UnknownRelation"


class RegroupChangedWord(StepError):
    reason = "RegroupChangedWord"


class BoundsExceeded(McgError):
    pass


class StepKind(enum.Enum):
    APPLY = "apply"
    INSERT = "insert"
    REGROUP = "regroup"


class Direction(enum.Enum):
    FWD = "fwd"
    REV = "rev"

    def flipped(self) -> Direction:
        return Direction.REV if self is Direction.FWD else Direction.FWD


@dataclass(frozen=True)
class Step:
    kind: StepKind
    relation_id: str | None = None
    position: int = 0
    direction: Direction = Direction.FWD
    pair: tuple = ()  # letters u; inserting places u u^-1
    to: tuple | None = None  # regroup target form
    note: str | None = None

    def render(self) -> str:
        if self.kind is StepKind.APPLY:
            return f"apply rel={self.relation_id} dir={self.direction.value} at={self.position}"
        if self.kind is StepKind.INSERT:
            return f"insert {render_letters(self.pair)} at={self.position}"
        return "regroup" + (f" to {render_letters(self.to)}" if self.to is not None else "")


@dataclass(frozen=True)
class Certificate:
    name: str
    source: Word
    target: Word
    steps: tuple
    context: str
    citation: str = ""
    notes: tuple = field(default=(), compare=False)

    def render(self) -> str:
        lines = [f"derive {self.name} : {self.source} => {self.target} in {self.context}"]
        if self.citation:
            lines.append(f"cite {self.citation}")
        for step in self.steps:
            lines.append(step.render() + (f"  # {step.note}" if step.note else ""))
        return "\n".join(lines) + "\n"


def apply_step(current, step: Step, instances: dict) -> tuple:
    """One step on a letter sequence; returns the new sequence."""
    letters = tuple(current.letters if isinstance(current, Word) else current)
    p = step.position
    if step.kind is StepKind.REGROUP:
        reduced = reduce_letters(letters)
        if step.to is None:
            return reduced
        if reduce_letters(step.to) != reduced:
            raise RegroupChangedWord(
                f"{render_letters(step.to)} is not freely equal to {render_letters(letters)}")
        return tuple(step.to)
    if not 0 <= p <= len(letters):
        raise NoMatchAtPosition(f"position {p} outside word of length {len(letters)}")
    if step.kind is StepKind.INSERT:
        return letters[:p] + tuple(step.pair) + invert_letters(step.pair) + letters[p:]
    inst = instances.get(step.relation_id)
    if inst is None:
        raise UnknownRelation(f"no relation {step.relation_id} in this context")
    src, dst = (inst.lhs, inst.rhs) if step.direction is Direction.FWD else (inst.rhs, inst.lhs)
    if letters[p:p + len(src)] != src.letters:
        raise NoMatchAtPosition(
            f"{render_letters(src.letters)} does not occur at {p} in {render_letters(letters)}")
    return letters[:p] + dst.letters + letters[p + len(src):]


@dataclass
class StepRecord:
    index: int
    rule: str
    before: str
    after: str | None
    verdict: str
    note: str | None = None
    reason: str | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class CheckReport:
    name: str
    verdict: str
    records: list
    final: str | None = None
    failed_step: int | None = None
    reason: str | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "final": self.final,
            "failed_step": self.failed_step,
            "reason": self.reason,
            "steps": [r.as_dict() for r in self.records],
        }

    def text(self) -> str:
        head = f"certificate {self.name}: {self.verdict}"
        if self.failed_step is not None:
            head += f" at step {self.failed_step} ({self.reason})"
        out = [head]
        for r in self.records:
            line = f"  [{r.index:>3}] {r.verdict:4} {r.rule}"
            if r.note:
                line += f"   ({r.note})"
            out.append(line)
            if r.verdict == "PASS":
                out.append(f"        => {r.after}")
            else:
                out.append(f"        !! {r.reason}")
        if self.verdict != "PASS" and self.failed_step is None:
            out.append(f"  final word {self.final} != target: {self.reason}")
        return "\n".join(out)


def check_certificate(cert: Certificate, instances: dict) -> CheckReport:
    records = []
    current = cert.source.letters
    for i, step in enumerate(cert.steps):
        before = render_letters(current)
        try:
            current = apply_step(current, step, instances)
        except StepError as exc:
            records.append(StepRecord(i, step.render(), before, None, "FAIL", step.note,
                                      f"{exc.reason}: {exc}"))
            return CheckReport(cert.name, "FAIL", records, None, i, exc.reason)
        records.append(StepRecord(i, step.render(), before, render_letters(current), "PASS",
                                  step.note))
    final = Word(current)
    if final != cert.target:
        return CheckReport(cert.name, "FAIL", records, str(final), None,
                           f"final word differs from target {cert.target}")
    return CheckReport(cert.name, "PASS", records, str(final))


def replay(cert: Certificate, instances: dict) -> list:
    """All intermediate letter sequences, source first; raises on a bad step."""
    states = [cert.source.letters]
    for step in cert.steps:
        states.append(apply_step(states[-1], step, instances))
    return states


def reverse_certificate(cert: Certificate, instances: dict) -> Certificate:
    """The same derivation read backwards, target to source."""
    states = replay(cert, instances)
    steps = []
    if states[-1] != cert.target.letters:
        steps.append(Step(StepKind.REGROUP, to=states[-1]))
    for i in range(len(cert.steps) - 1, -1, -1):
        step = cert.steps[i]
        if step.kind is StepKind.APPLY:
            steps.append(replace(step, direction=step.direction.flipped(), note=None))
        else:
            steps.append(Step(StepKind.REGROUP, to=states[i]))
    return Certificate(cert.name + "_reversed", cert.target, cert.source, tuple(steps),
                       cert.context, cert.citation)


@dataclass(frozen=True)
class SearchBounds:
    max_steps: int
    max_word_length: int
    max_states: int

    def __post_init__(self):
        if min(self.max_steps, self.max_word_length, self.max_states) <= 0:
            raise ValueError("search bounds must be positive")


def _moves(word: tuple, instances: dict):
    for rid, inst in instances.items():
        for direction in (Direction.FWD, Direction.REV):
            src, dst = (inst.lhs, inst.rhs) if direction is Direction.FWD else (inst.rhs, inst.lhs)
            n = len(src)
            if n == 0 and len(dst) == 0:
                continue
            for p in range(len(word) - n + 1):
                if word[p:p + n] == src.letters:
                    yield rid, direction, p, word[:p] + dst.letters + word[p + n:]


def find_derivation(source: Word, target: Word, instances: dict, bounds: SearchBounds,
                    name: str = "found", context: str = "") -> Certificate | None:
    """Breadth-first search over reduced words.

    Returns None when every word within the length bound was explored
    without reaching the target; raises BoundsExceeded when the step or
    state budget ran out first.
    """
    key = lambda letters: (len(letters), render_letters(letters))  # noqa: E731
    start, goal = source.letters, target.letters
    parents = {start: None}
    frontier = [start]
    pruned = False
    depth = 0
    while goal not in parents and frontier:
        if depth == bounds.max_steps:
            raise BoundsExceeded(f"no derivation within {bounds.max_steps} steps")
        nxt = []
        for word in sorted(frontier, key=key):
            for rid, direction, p, raw in _moves(word, instances):
                reduced = reduce_letters(raw)
                if len(reduced) > bounds.max_word_length:
                    pruned = True
                    continue
                if reduced in parents:
                    continue
                parents[reduced] = (word, rid, direction, p, raw)
                nxt.append(reduced)
                if len(parents) > bounds.max_states:
                    raise BoundsExceeded(f"more than {bounds.max_states} states")
        frontier = nxt
        depth += 1
    if goal not in parents:
        if pruned:
            raise BoundsExceeded(f"words longer than {bounds.max_word_length} were pruned")
        return None
    steps = []
    node = target.letters
    while parents[node] is not None:
        word, rid, direction, p, raw = parents[node]
        block = [Step(StepKind.APPLY, rid, p, direction)]
        if raw != node:
            block.append(Step(StepKind.REGROUP))
        steps[:0] = block
        node = word
    return Certificate(name, source, target, tuple(steps), context)


def mutations(cert: Certificate, relation_ids) -> list:
    """Single-field corruptions of every apply step.

    Position shifted by +1 and -1, direction flipped, and the relation id
    swapped for the next different id in ``relation_ids``.
    """
    ids = list(relation_ids)
    out = []
    for i, step in enumerate(cert.steps):
        if step.kind is not StepKind.APPLY:
            continue
        variants = [
            (f"step {i}: at+1", replace(step, position=step.position + 1)),
            (f"step {i}: dir flipped", replace(step, direction=step.direction.flipped())),
        ]
        if step.position > 0:
            variants.append((f"step {i}: at-1", replace(step, position=step.position - 1)))
        if step.relation_id in ids:
            j = ids.index(step.relation_id)
            other = next((ids[(j + d) % len(ids)] for d in range(1, len(ids))
                          if ids[(j + d) % len(ids)] != step.relation_id), None)
            if other is not None:
                variants.append((f"step {i}: rel {other}", replace(step, relation_id=other)))
        for label, new in variants:
            steps = cert.steps[:i] + (new,) + cert.steps[i + 1:]
            out.append((label, replace(cert, steps=steps)))
    return out


# -- documents ---------------------------------------------------------------

def certificate_from_document(doc: dsl.Document) -> Certificate:
    head = doc.first("derive")
    cite = doc.first("cite")
    steps = []
    for st in doc.statements:
        note = st.comment.strip() if st.comment else None
        if st.keyword == "apply":
            steps.append(Step(StepKind.APPLY, st["rel"], st["at"], Direction(st["dir"]), note=note))
        elif st.keyword == "insert":
            steps.append(Step(StepKind.INSERT, position=st["at"], pair=tuple(st["word"]), note=note))
        elif st.keyword == "regroup":
            to = tuple(st["to"]) if st["to"] is not None else None
            steps.append(Step(StepKind.REGROUP, to=to, note=note))
    return Certificate(head["name"], Word(head["source"]), Word(head["target"]), tuple(steps),
                       head["context"], cite["text"] if cite else "")


def load_certificate(path) -> Certificate:
    from .catalog import resolve

    p = resolve(str(path), "certificates", "deriv")
    return certificate_from_document(dsl.parse(p.read_text(), dsl.DocKind.DERIVATION, str(p)))


def parse_certificate(text: str) -> Certificate:
    return certificate_from_document(dsl.parse(text, dsl.DocKind.DERIVATION))


def check_file(path) -> CheckReport:
    from .schemas import store_for

    cert = load_certificate(path)
    _, store = store_for(cert.context)
    return check_certificate(cert, store)


def certificate_path(name: str) -> Path:
    from .catalog import resolve

    return resolve(name, "certificates", "deriv")


__all__ = [
    "Certificate", "CheckReport", "Direction", "Letter", "Step", "StepKind", "SearchBounds",
    "apply_step", "check_certificate", "find_derivation", "mutations", "reverse_certificate",
]
