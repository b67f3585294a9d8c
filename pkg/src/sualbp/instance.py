"""Problem data for line balancing with sequence-dependent setups.

Tasks are 0-based everywhere inside the package. The 1-based numbering used
by ``.alb`` files and the canonical JSON document is converted at the I/O
boundary only.
"""

from __future__ import annotations

import enum
import json
import re
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]

TRIANGLE_WARNING_CAP = 100


class InstanceError(ValueError):
    """Raised for malformed or invalid instance data."""


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None, tag: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if tag is not None:
            where.append(f"tag <{tag}>")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.tag = tag


class AlbWarning(UserWarning):
    pass


class Rounding(str, enum.Enum):
    FLOOR = "floor"
    HALF = "half"
    CEIL = "ceil"


@dataclass(frozen=True)
class Instance:
    task_times: tuple[int, ...]
    precedence: tuple[tuple[int, int], ...]
    fwd_setup: Matrix
    bwd_setup: Matrix
    cycle_time: int | None = None
    station_count: int | None = None
    name: str = ""
    alpha: float | None = None

    @property
    def n(self) -> int:
        return len(self.task_times)

    @property
    def total_time(self) -> int:
        return sum(self.task_times)

    def with_cycle_time(self, c: int) -> Instance:
        return replace(self, cycle_time=c)

    def with_station_count(self, m: int) -> Instance:
        return replace(self, station_count=m)


@dataclass
class Diagnostics:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def make_instance(
    task_times: Sequence[int],
    precedence: Iterable[tuple[int, int]] = (),
    fwd_setup: Sequence[Sequence[int]] | None = None,
    bwd_setup: Sequence[Sequence[int]] | None = None,
    **kwargs,
) -> Instance:
    """Build an Instance from 0-based lists, zero-filling missing matrices."""
    n = len(task_times)
    zero = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    fwd = zero if fwd_setup is None else tuple(tuple(int(v) for v in row) for row in fwd_setup)
    bwd = zero if bwd_setup is None else tuple(tuple(int(v) for v in row) for row in bwd_setup)
    prec = tuple(sorted({(int(i), int(j)) for i, j in precedence}))
    return Instance(tuple(int(t) for t in task_times), prec, fwd, bwd, **kwargs)


def find_cycle(n: int, precedence: Iterable[tuple[int, int]]) -> list[int] | None:
    """Return one directed cycle (as a node list) or None if the graph is acyclic."""
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in precedence:
        succ[i].append(j)
    color = [0] * n  # 0 new, 1 on stack, 2 done
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(succ[nxt])))
                    break
                if color[nxt] == 1:
                    cyc = [node]
                    while cyc[-1] != nxt:
                        cyc.append(parent[cyc[-1]])
                    return cyc[::-1]
            else:
                color[node] = 2
                stack.pop()
    return None


def topological_order(n: int, precedence: Iterable[tuple[int, int]]) -> list[int]:
    """Kahn's algorithm, always releasing the smallest available index first."""
    import heapq

    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j in precedence:
        succ[i].append(j)
        indeg[j] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != n:
        raise InstanceError("precedence graph contains a cycle")
    return order


def triangle_violations(inst: Instance, cap: int = TRIANGLE_WARNING_CAP) -> list[str]:
    """Setup triples that break the triangle inequality, 1-based in the messages.

    Besides the forward form tau_ik <= tau_ij + t_j + tau_jk, the two mixed
    forms involving backward setups are checked; together they guarantee that
    removing a task from a station never lengthens that station.
    """
    n, t, tau, mu = inst.n, inst.task_times, inst.fwd_setup, inst.bwd_setup
    out: list[str] = []
    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            for k in range(n):
                if k == j:
                    continue
                if i != k and tau[i][k] > tau[i][j] + t[j] + tau[j][k]:
                    out.append(
                        f"forward triangle violation ({i + 1},{j + 1},{k + 1}): "
                        f"{tau[i][k]} > {tau[i][j]} + {t[j]} + {tau[j][k]}"
                    )
                if mu[i][k] > tau[i][j] + t[j] + mu[j][k]:
                    out.append(f"backward triangle violation (last {j + 1}) ({i + 1},{j + 1},{k + 1})")
                if mu[i][k] > mu[i][j] + t[j] + tau[j][k]:
                    out.append(f"backward triangle violation (first {j + 1}) ({i + 1},{j + 1},{k + 1})")
                if len(out) >= cap:
                    return out[:cap]
    return out


def validate_instance(inst: Instance, problem_type: int | None = None) -> Diagnostics:
    """Collect every invariant violation as an error and setup-triangle issues as warnings.

    ``problem_type`` narrows the type-specific checks: 1 requires a cycle time
    that admits every task alone on a station, 2 requires a station count.
    With ``None`` the cycle-time check runs whenever a cycle time is present.
    """
    diag = Diagnostics()
    n = inst.n
    if n == 0:
        diag.errors.append("instance has no tasks")
    for i, t in enumerate(inst.task_times):
        if t < 1:
            diag.errors.append(f"task {i + 1} has non-positive time {t}")
    for label, mat in (("forward", inst.fwd_setup), ("backward", inst.bwd_setup)):
        if len(mat) != n or any(len(row) != n for row in mat):
            diag.errors.append(f"{label} setup matrix is not {n}x{n}")
            continue
        neg = [(i, j) for i in range(n) for j in range(n) if mat[i][j] < 0]
        if neg:
            i, j = neg[0]
            diag.errors.append(f"{label} setup ({i + 1},{j + 1}) is negative; {len(neg)} negative entries")
    pairs_ok = True
    for i, j in inst.precedence:
        if not (0 <= i < n and 0 <= j < n):
            diag.errors.append(f"precedence ({i + 1},{j + 1}) references a task outside 1..{n}")
            pairs_ok = False
        elif i == j:
            diag.errors.append(f"precedence ({i + 1},{j + 1}) is a self-loop cycle")
            pairs_ok = False
    if pairs_ok:
        cyc = find_cycle(n, inst.precedence)
        if cyc is not None:
            diag.errors.append("precedence graph has a cycle: " + " -> ".join(str(v + 1) for v in cyc + cyc[:1]))
    if inst.cycle_time is not None and inst.cycle_time < 1:
        diag.errors.append(f"cycle time {inst.cycle_time} is not positive")
    if inst.station_count is not None and inst.station_count < 1:
        diag.errors.append(f"station count {inst.station_count} is not positive")
    if problem_type == 2 and inst.station_count is None:
        diag.errors.append("type-2 run requires a station count")
    if problem_type == 1 and inst.cycle_time is None:
        diag.errors.append("type-1 run requires a cycle time")
    matrices_ok = not any("matrix" in e or "negative" in e for e in diag.errors)
    if problem_type in (None, 1) and inst.cycle_time is not None and matrices_ok and n:
        for i in range(n):
            alone = inst.task_times[i] + inst.bwd_setup[i][i]
            if alone > inst.cycle_time:
                diag.errors.append(
                    f"task {i + 1} alone needs {alone} > cycle time {inst.cycle_time}; instance infeasible"
                )
    if matrices_ok and n:
        diag.warnings.extend(triangle_violations(inst))
    return diag


def derive_station_count(inst: Instance, policy: Rounding | str = Rounding.CEIL) -> int:
    """Station count sum(t)/c under a rounding policy, at least 1."""
    if inst.cycle_time is None:
        raise InstanceError("deriving a station count needs a cycle time")
    policy = Rounding(policy)
    ratio = Fraction(inst.total_time, inst.cycle_time)
    if policy is Rounding.FLOOR:
        m = ratio.numerator // ratio.denominator
    elif policy is Rounding.CEIL:
        m = -((-ratio.numerator) // ratio.denominator)
    else:
        half = ratio + Fraction(1, 2)
        m = half.numerator // half.denominator
    return max(1, m)


# --------------------------------------------------------------------------
# .alb parsing

_FWD_TAGS = {
    "sequence dependent time increments",
    "setup times forward",
    "forward setup times",
    "forward setups",
    "setups forward",
    "forward setup",
}
_BWD_TAGS = {
    "setup times backward",
    "backward setup times",
    "backward setups",
    "setups backward",
    "backward setup",
    "sequence dependent backward time increments",
}
_IGNORED_TAGS = {"order strength"}
_TAG_RE = re.compile(r"^<\s*([^>]*?)\s*>\s*(.*)$")
_SPLIT_RE = re.compile(r"[,;:\s]+")


def _ints(tokens: list[str], line: int, tag: str) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", line, tag) from None
    return out


def parse_alb(text: str, name: str = "", alpha: float | None = None) -> Instance:
    """Parse a tag-delimited ``.alb`` file.

    Forward and backward setups are read as ``i,j,value`` triplets (any of
    comma, semicolon, colon or whitespace separates the fields). Pairs that are
    not listed default to zero.
    """
    sections: dict[str, tuple[int, list[tuple[int, list[str]]]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _TAG_RE.match(line)
        if m:
            tag = " ".join(m.group(1).lower().split())
            if tag == "end":
                current = None
                break
            if tag in sections:
                raise ParseError("duplicate section", lineno, tag)
            sections[tag] = (lineno, [])
            current = tag
            rest = m.group(2).strip()
            if rest:
                sections[tag][1].append((lineno, [tok for tok in _SPLIT_RE.split(rest) if tok]))
            continue
        if current is None:
            raise ParseError(f"data outside any section: {line!r}", lineno)
        sections[current][1].append((lineno, [tok for tok in _SPLIT_RE.split(line) if tok]))

    if "number of tasks" not in sections:
        raise ParseError("missing section", tag="number of tasks")
    tag_line, rows = sections["number of tasks"]
    if len(rows) != 1 or len(rows[0][1]) != 1:
        raise ParseError("expected a single integer", tag_line, "number of tasks")
    n = _ints(rows[0][1], rows[0][0], "number of tasks")[0]
    if n < 1:
        raise ParseError("task count must be positive", tag_line, "number of tasks")

    cycle_time = None
    if "cycle time" in sections:
        tag_line, rows = sections["cycle time"]
        if len(rows) != 1 or len(rows[0][1]) != 1:
            raise ParseError("expected a single integer", tag_line, "cycle time")
        cycle_time = _ints(rows[0][1], rows[0][0], "cycle time")[0]

    if "task times" not in sections:
        raise ParseError("missing section", tag="task times")
    times: dict[int, int] = {}
    for lineno, toks in sections["task times"][1]:
        if len(toks) != 2:
            raise ParseError("expected 'task time'", lineno, "task times")
        i, t = _ints(toks, lineno, "task times")
        if not 1 <= i <= n:
            raise ParseError(f"task id {i} out of range 1..{n}", lineno, "task times")
        if i in times:
            raise ParseError(f"duplicate task id {i}", lineno, "task times")
        times[i] = t
    if len(times) != n:
        missing = sorted(set(range(1, n + 1)) - set(times))
        raise ParseError(f"missing times for tasks {missing}", sections["task times"][0], "task times")

    precedence: list[tuple[int, int]] = []
    prec_line = None
    if "precedence relations" in sections:
        prec_line, rows = sections["precedence relations"]
        for lineno, toks in rows:
            if len(toks) != 2:
                raise ParseError("expected 'i,j'", lineno, "precedence relations")
            i, j = _ints(toks, lineno, "precedence relations")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ParseError(f"pair ({i},{j}) out of range 1..{n}", lineno, "precedence relations")
            precedence.append((i - 1, j - 1))
    cyc = find_cycle(n, precedence)
    if cyc is not None:
        raise ParseError(
            "precedence cycle " + " -> ".join(str(v + 1) for v in cyc + cyc[:1]),
            prec_line,
            "precedence relations",
        )

    def read_matrix(tags: set[str], label: str) -> list[list[int]]:
        mat = [[0] * n for _ in range(n)]
        found = [t for t in sections if t in tags]
        if not found:
            warnings.warn(f"no {label} setup section; assuming zero {label} setups", AlbWarning, stacklevel=3)
            return mat
        if len(found) > 1:
            raise ParseError(f"several {label} setup sections: {found}", sections[found[1]][0], found[1])
        tag = found[0]
        seen = set()
        for lineno, toks in sections[tag][1]:
            if len(toks) != 3:
                raise ParseError("expected 'i,j,value'", lineno, tag)
            i, j, v = _ints(toks, lineno, tag)
            if not (1 <= i <= n and 1 <= j <= n):
                raise ParseError(f"pair ({i},{j}) out of range 1..{n}", lineno, tag)
            if (i, j) in seen:
                raise ParseError(f"duplicate entry ({i},{j})", lineno, tag)
            seen.add((i, j))
            mat[i - 1][j - 1] = v
        return mat

    fwd = read_matrix(_FWD_TAGS, "forward")
    bwd = read_matrix(_BWD_TAGS, "backward")
    known = {"number of tasks", "cycle time", "task times", "precedence relations"} | _FWD_TAGS | _BWD_TAGS
    for tag in sections:
        if tag not in known and tag not in _IGNORED_TAGS:
            warnings.warn(f"skipping unknown section <{tag}>", AlbWarning, stacklevel=2)

    return make_instance(
        [times[i] for i in range(1, n + 1)],
        precedence,
        fwd,
        bwd,
        cycle_time=cycle_time,
        name=name,
        alpha=alpha,
    )


def to_alb(inst: Instance) -> str:
    """Serialize to the ``.alb`` dialect read by :func:`parse_alb`."""
    lines = ["<number of tasks>", str(inst.n), ""]
    if inst.cycle_time is not None:
        lines += ["<cycle time>", str(inst.cycle_time), ""]
    lines.append("<task times>")
    lines += [f"{i + 1} {t}" for i, t in enumerate(inst.task_times)]
    lines += ["", "<precedence relations>"]
    lines += [f"{i + 1},{j + 1}" for i, j in inst.precedence]
    for tag, mat in (("setup times forward", inst.fwd_setup), ("setup times backward", inst.bwd_setup)):
        lines += ["", f"<{tag}>"]
        lines += [f"{i + 1},{j + 1},{v}" for i, row in enumerate(mat) for j, v in enumerate(row) if v]
    lines += ["", "<end>", ""]
    return "\n".join(lines)


# --------------------------------------------------------------------------
# canonical document

FORMAT_TAG = "sualbp-instance"


def to_document(inst: Instance) -> dict:
    return {
        "format": FORMAT_TAG,
        "version": 1,
        "name": inst.name,
        "alpha": inst.alpha,
        "n": inst.n,
        "cycle_time": inst.cycle_time,
        "station_count": inst.station_count,
        "task_times": list(inst.task_times),
        "precedence": [[i + 1, j + 1] for i, j in inst.precedence],
        "fwd_setup": [list(r) for r in inst.fwd_setup],
        "bwd_setup": [list(r) for r in inst.bwd_setup],
    }


def _strict_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{what} must be an integer, got {value!r}")
    return value


def from_document(doc: dict) -> Instance:
    if doc.get("format") != FORMAT_TAG:
        raise InstanceError(f"not a {FORMAT_TAG} document")
    n = _strict_int(doc["n"], "n")
    times = [_strict_int(t, "task time") for t in doc["task_times"]]
    if len(times) != n:
        raise InstanceError(f"expected {n} task times, got {len(times)}")
    prec = []
    for pair in doc.get("precedence", []):
        i, j = (_strict_int(v, "precedence index") for v in pair)
        if not (1 <= i <= n and 1 <= j <= n):
            raise InstanceError(f"precedence ({i},{j}) out of range 1..{n}")
        prec.append((i - 1, j - 1))
    mats = []
    for key in ("fwd_setup", "bwd_setup"):
        rows = doc.get(key)
        if rows is None:
            mats.append(None)
            continue
        mats.append([[_strict_int(v, key) for v in row] for row in rows])
    c = doc.get("cycle_time")
    m = doc.get("station_count")
    return make_instance(
        times,
        prec,
        mats[0],
        mats[1],
        cycle_time=None if c is None else _strict_int(c, "cycle_time"),
        station_count=None if m is None else _strict_int(m, "station_count"),
        name=doc.get("name", ""),
        alpha=doc.get("alpha"),
    )


def dumps(inst: Instance) -> str:
    return json.dumps(to_document(inst), indent=1)


def loads(text: str) -> Instance:
    return from_document(json.loads(text))


def guess_alpha(path: Path) -> float | None:
    """Read the setup ratio from a path component such as ``alpha=0.50`` or ``0.75``."""
    for part in reversed(path.parent.parts):
        m = re.fullmatch(r"(?:alpha|a)?[=_-]?(0\.\d+|1\.0+)", part.lower())
        if m:
            return float(m.group(1))
    m = re.search(r"alpha[=_-]?(0\.\d+|1\.0+)", path.name.lower())
    return float(m.group(1)) if m else None


def load_instance(path: str | Path, alpha: float | None = None) -> Instance:
    """Load a ``.json`` canonical document or a ``.alb`` file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        inst = loads(text)
        if not inst.name:
            inst = replace(inst, name=path.stem)
        return inst
    return parse_alb(text, name=path.stem, alpha=alpha if alpha is not None else guess_alpha(path))


def save_instance(inst: Instance, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(dumps(inst) + "\n", encoding="utf-8")
    else:
        path.write_text(to_alb(inst), encoding="utf-8")
