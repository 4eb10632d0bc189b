"""Grid sweeps over the inequality verifiers and deterministic report assembly.

A sweep is expanded into a list of picklable tasks (one per grid point);
tasks run serially or in a process pool and the collected margins are
sorted before any report is written, so the output does not depend on the
worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from rasacx.bernstein import standard_battery
from rasacx.functions import ConvexTestFunction
from rasacx.majorization import random_majorized_pair
from rasacx.numerics import format_rational
from rasacx.rasa import (
    InequalityMargin,
    chain_margins_many,
    generalized_inequalities_many,
    hlp_sum_many,
    rasa_original_many,
    split_inequalities_many,
)

log = logging.getLogger(__name__)

BATTERY = "battery"

FunctionChoice = Union[str, ConvexTestFunction]

CSV_COLUMNS = ("inequality_id", "params", "f", "lhs", "rhs", "margin", "holds")


def grid(denominator: int) -> List[Fraction]:
    """``a/d`` for ``a = 0..d``."""
    if denominator < 1:
        raise ValueError("grid denominator must be >= 1")
    return [Fraction(a, denominator) for a in range(denominator + 1)]


@lru_cache(maxsize=256)
def _battery(m: int, seed: int) -> Tuple[ConvexTestFunction, ...]:
    return tuple(standard_battery(m, seed))


def functions_for(choice: FunctionChoice, m: int, seed: int) -> Sequence[ConvexTestFunction]:
    """The standard battery for lattice ``j/m``, or the single fixed function."""
    if isinstance(choice, ConvexTestFunction):
        return (choice,)
    if choice == BATTERY:
        return _battery(m, seed)
    raise ValueError(f"unknown function choice {choice!r}")


def _run_task(task: Tuple) -> List[InequalityMargin]:
    kind, choice, seed, *args = task
    if kind == "rasa":
        n, x, y = args
        return rasa_original_many(n, x, y, functions_for(choice, 2 * n, seed))
    if kind == "split":
        n, x, y = args
        return split_inequalities_many(n, x, y, functions_for(choice, 2 * n, seed))
    if kind == "general":
        ns, xs = args
        return generalized_inequalities_many(ns, xs, functions_for(choice, sum(ns), seed))
    if kind == "chains":
        ns, xs = args
        return chain_margins_many(ns, xs, functions_for(choice, sum(ns), seed))
    if kind == "hlp":
        n, p, q = args
        return hlp_sum_many(n, p, q, functions_for(choice, n, seed))
    raise ValueError(f"unknown task kind {kind!r}")


def run_tasks(tasks: Sequence[Tuple], workers: int = 1) -> Iterator[InequalityMargin]:
    """Evaluate tasks, yielding margins in task order."""
    if workers <= 1 or len(tasks) < 2:
        for task in tasks:
            yield from _run_task(task)
        return
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for margins in pool.map(_run_task, tasks, chunksize=chunk):
            yield from margins


# -- task builders -------------------------------------------------------------


def rasa_tasks(kind: str, n_values: Iterable[int], denominator: int, choice: FunctionChoice, seed: int) -> List[Tuple]:
    """Tasks for the two-point sweeps (``kind`` is ``"rasa"`` or ``"split"``)."""
    pts = grid(denominator)
    return [(kind, choice, seed, n, x, y) for n in n_values for x in pts for y in pts]


def block_tasks(
    kind: str,
    ns_list: Iterable[Sequence[int]],
    denominator: int,
    choice: FunctionChoice,
    seed: int,
    xs_list: Optional[Sequence[Sequence[Fraction]]] = None,
) -> List[Tuple]:
    """Tasks for the k-block sweeps (``"general"`` or ``"chains"``).

    Without ``xs_list`` every ``ns`` is paired with the full grid of
    ``len(ns)``-tuples; otherwise with each given tuple of matching length.
    """
    pts = grid(denominator)
    tasks = []
    for ns in ns_list:
        ns = tuple(ns)
        if xs_list is None:
            candidates = itertools.product(pts, repeat=len(ns))
        else:
            candidates = [tuple(xs) for xs in xs_list if len(xs) == len(ns)]
        tasks += [(kind, choice, seed, ns, tuple(xs)) for xs in candidates]
    return tasks


def ns_product(ks: Iterable[int], n_values: Sequence[int]) -> List[Tuple[int, ...]]:
    return [ns for k in ks for ns in itertools.product(n_values, repeat=k)]


def hlp_tasks(
    n_values: Iterable[int], pairs: int, choice: FunctionChoice, seed: int, max_len: int = 6
) -> List[Tuple]:
    """Seeded random majorized pairs, each checked for every ``n``."""
    rng = random.Random(seed)
    vectors = []
    for _ in range(pairs):
        p, q = random_majorized_pair(rng, rng.randint(2, max_len))
        vectors.append((p.entries, q.entries))
    return [("hlp", choice, seed, n, p, q) for n in n_values for p, q in vectors]


# -- reports -------------------------------------------------------------------


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    margins: List[InequalityMargin] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.margins.sort(key=InequalityMargin.sort_key)

    @property
    def failures(self) -> List[InequalityMargin]:
        return [m for m in self.margins if not m.holds]

    def summary(self) -> Dict[str, Any]:
        return {"total": len(self.margins), "failures": len(self.failures)}

    def to_json(self) -> str:
        head = {
            "command": self.command,
            "config": self.config,
            "summary": self.summary(),
            "witnesses": [m.to_record() for m in self.failures],
        }
        text = json.dumps(head, sort_keys=False)
        body = ",\n".join(json.dumps(m.to_record()) for m in self.margins)
        return text[:-1] + ', "records": [\n' + body + "\n]}\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for m in self.margins:
            rec = m.to_record()
            rec["params"] = json.dumps(rec["params"])
            writer.writerow([rec[c] for c in CSV_COLUMNS])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown report format {fmt!r}")


def build_report(command: str, config: Dict[str, Any], tasks: Sequence[Tuple], workers: int = 1) -> Report:
    report = Report(command, config, list(run_tasks(tasks, workers)))
    for m in report.failures:
        log.warning(
            "inequality %s fails at %s for %s: lhs=%s rhs=%s",
            m.inequality_id,
            m.to_record()["params"],
            m.f_id,
            format_rational(m.lhs),
            format_rational(m.rhs),
        )
    return report


def count_failures(tasks: Sequence[Tuple], workers: int = 1) -> Tuple[int, List[InequalityMargin]]:
    """Stream a sweep without keeping margins; returns (total, failing margins)."""
    total = 0
    failing = []
    for m in run_tasks(tasks, workers):
        total += 1
        if not m.holds:
            failing.append(m)
    return total, failing
