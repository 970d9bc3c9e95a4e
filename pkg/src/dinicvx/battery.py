"""Benchmark batteries: hand-labeled functions plus a seeded random family.

The golden battery is a fixed list of expressions whose classification
outcomes were worked out by hand; it pins the four classifiers to known
answers across the qualitative regimes (smooth valleys, kinks, plateaus at
and off the minimum, lower-semicontinuous jumps, monotone ramps, peaks,
double wells, undefined values).  The random battery generates piecewise
cubic functions that are lower semicontinuous by construction.  Valley and
monotone draws carry expected labels with comfortable numeric margins
(piece slopes at least 0.05 in magnitude, jumps at least 0.05); arbitrary
draws carry no labels and exercise pure oracle/characterization agreement.

Every random function is serialized to an expression string and parsed
back, so anything the battery classifies also flows through the grammar.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "BatteryEntry",
    "golden_battery",
    "random_battery",
    "write_manifest",
    "load_manifest",
]

LABELS = ("pseudoconvex", "strictly_pseudoconvex", "quasiconvex",
          "semistrictly_quasiconvex")


@dataclass(frozen=True)
class BatteryEntry:
    """One benchmark function with optional hand-derived expected labels.

    ``expected`` maps label names to booleans, or is None for entries used
    only for method-agreement checks.  ``lsc`` and ``radially_continuous``
    gate which theorem checks apply.  ``pairs`` optionally pins explicit
    (x, y) point pairs for restriction-based checks on multivariate
    entries.
    """

    id: str
    expression: str
    arity: int
    domain: str | None = None
    box: tuple[str, ...] | None = None
    lsc: bool = True
    radially_continuous: bool = True
    expected: dict[str, bool] | None = None
    pairs: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] | None = None
    tags: tuple[str, ...] = ()


def _exp(pc: bool, spc: bool, qc: bool, ssqc: bool) -> dict[str, bool]:
    return {
        "pseudoconvex": pc,
        "strictly_pseudoconvex": spc,
        "quasiconvex": qc,
        "semistrictly_quasiconvex": ssqc,
    }


def golden_battery() -> tuple[BatteryEntry, ...]:
    """The fixed hand-labeled battery."""
    e: list[BatteryEntry] = []

    def add(id_, expr, dom, pc, spc, qc, ssqc, *, lsc=True, rc=True, tags=()):
        e.append(
            BatteryEntry(
                id=id_, expression=expr, arity=1, domain=dom, lsc=lsc,
                radially_continuous=rc, expected=_exp(pc, spc, qc, ssqc),
                tags=("golden",) + tuple(tags),
            )
        )

    add("sq", "t^2", "[-1,1]", True, True, True, True, tags=("smooth",))
    add("cube", "t^3", "[-1,1]", False, False, True, True,
        tags=("smooth", "stationary_nonmin"))
    add("vee", "abs(t)", "[-1,1]", True, True, True, True, tags=("kink",))
    add("plateau-bowl", "max(0, abs(t) - 1)", "[-2,2]", True, False, True, True,
        tags=("plateau_min",))
    add("half-plateau-ramp", "piecewise(t < 0: 1, else: t)", "[-1,1]",
        False, False, True, False, tags=("plateau_off_min", "jump"), rc=False)
    add("ramp", "t", "[0,1]", True, True, True, True, tags=("monotone",))
    add("neg-ramp", "-t", "[-1,1]", True, True, True, True, tags=("monotone",))
    add("const", "1", "[-1,1]", True, False, True, True, tags=("constant",))
    add("neg-sq", "-t^2", "[-1,1]", False, False, False, False, tags=("peak",))
    add("jump-valley", "piecewise(t < 0: -t, else: t - 1)", "[-2,2]",
        True, True, True, True, tags=("jump",), rc=False)
    add("jump-plateau-valley", "piecewise(t < -1: -t, t <= 1: -1, else: t - 1)",
        "[-2,2]", True, False, True, True, tags=("jump", "plateau_min"), rc=False)
    add("rise-drop-rise", "piecewise(t < 0: t + 2, else: t + 1)", "[-2,2]",
        False, False, False, False, tags=("jump",), rc=False)
    add("exp", "exp(t)", "[-1,1]", True, True, True, True, tags=("smooth",))
    add("exp-vee", "exp(abs(t))", "[-1,1]", True, True, True, True, tags=("kink",))
    add("sqrt-vee", "sqrt(abs(t))", "[-1,1]", True, True, True, True,
        tags=("kink", "infinite_slope"))
    add("neg-vee", "-abs(t)", "[-1,1]", False, False, False, False, tags=("peak",))
    add("w-shape", "min(t^2, (t - 1.5)^2 + 0.3)", "[-1,3]",
        False, False, False, False, tags=("double_well",))
    add("step-down", "piecewise(t < 0.5: 1, else: 0)", "[0,1]",
        False, False, True, False, tags=("jump", "plateau_off_min"), rc=False)
    add("asym-vee", "piecewise(t < 0: -2*t, else: 0.5*t)", "[-1,1]",
        True, True, True, True, tags=("kink",))
    e.append(
        BatteryEntry(
            id="log-partial", expression="log(t)", arity=1, domain="[-1,1]",
            lsc=False, radially_continuous=False, expected=None,
            tags=("golden", "undefined_values"),
        )
    )

    box = ("[-1,1]", "[-1,1]")
    e.append(BatteryEntry(
        id="bowl2", expression="x1^2 + x2^2", arity=2, box=box,
        expected=_exp(True, True, True, True), tags=("golden", "multivariate")))
    e.append(BatteryEntry(
        id="plane", expression="x1 + x2", arity=2, box=box,
        expected=_exp(True, True, True, True), tags=("golden", "multivariate")))
    e.append(BatteryEntry(
        id="l1-norm", expression="abs(x1) + abs(x2)", arity=2, box=box,
        expected=_exp(True, True, True, True), tags=("golden", "multivariate")))
    e.append(BatteryEntry(
        id="linf-norm", expression="max(abs(x1), abs(x2))", arity=2, box=box,
        expected=_exp(True, False, True, True), tags=("golden", "multivariate")))
    e.append(BatteryEntry(
        id="ridge", expression="x1^2", arity=2, box=box,
        expected=_exp(True, False, True, True), tags=("golden", "multivariate")))
    e.append(BatteryEntry(
        id="cube-x1", expression="x1^3", arity=2, box=box,
        expected=_exp(False, False, True, True),
        pairs=(((0.0, 0.0), (-0.5, 0.1)),),
        tags=("golden", "multivariate", "stationary_nonmin")))
    return tuple(e)


def _fmt(x: float) -> str:
    return repr(float(x))


def _poly_src(c: np.ndarray) -> str:
    """Cubic c0 + c1 t + c2 t^2 + c3 t^3 in Horner form, parse-safe."""
    c0, c1, c2, c3 = (float(v) for v in c)
    return (
        f"((({_fmt(c3)})*t + ({_fmt(c2)}))*t + ({_fmt(c1)}))*t + ({_fmt(c0)})"
    )


def _shifted(c: np.ndarray, delta: float) -> np.ndarray:
    out = c.copy()
    out[0] += delta
    return out


def _flank_piece(
    rng: np.random.Generator, lo: float, hi: float, end_value: float,
    direction: int,
) -> tuple[np.ndarray, float]:
    """A cubic strictly monotone on [lo, hi] with |slope| >= 0.05.

    direction -1: strictly decreasing, anchored to ``end_value`` at ``hi``
    (left flank built outward from the valley).  direction +1: strictly
    increasing, anchored at ``lo``.  Returns (coefficients, value at the
    free end).
    """
    a = rng.uniform(0.05, 1.2)
    b = rng.uniform(0.0, 0.8)
    c = rng.uniform(0.0, 0.5)
    if direction < 0:
        # p(t) = v + a (e-t) + b/2 (e-t)^2 + c/3 (e-t)^3 with e = hi
        e_ = hi
        coefs = np.zeros(4)
        coefs[0] = end_value + a * e_ + (b / 2) * e_**2 + (c / 3) * e_**3
        coefs[1] = -(a + b * e_ + c * e_**2)
        coefs[2] = b / 2 + c * e_
        coefs[3] = -c / 3
        span = e_ - lo
        free = end_value + a * span + (b / 2) * span**2 + (c / 3) * span**3
    else:
        # p(t) = v + a (t-s) + b/2 (t-s)^2 + c/3 (t-s)^3 with s = lo
        s_ = lo
        coefs = np.zeros(4)
        coefs[0] = end_value - a * s_ + (b / 2) * s_**2 - (c / 3) * s_**3
        coefs[1] = a - b * s_ + c * s_**2
        coefs[2] = b / 2 - c * s_
        coefs[3] = c / 3
        span = hi - lo
        free = end_value + a * span + (b / 2) * span**2 + (c / 3) * span**3
    return coefs, free


def _breakpoints(rng: np.random.Generator, lo: float, hi: float, k: int) -> list[float]:
    """k interior breakpoints with mutual gaps of at least 0.15."""
    while True:
        pts = np.sort(rng.uniform(lo + 0.2, hi - 0.2, size=k))
        if k < 2 or float(np.min(np.diff(pts))) >= 0.15:
            return [float(p) for p in pts]


def _assemble(branches: list[tuple[str, float, np.ndarray]], last: np.ndarray) -> str:
    """branches: (op, breakpoint, coefs) for every piece but the last."""
    if not branches:
        return _poly_src(last)
    parts = [f"t {op} {_fmt(b)}: {_poly_src(c)}" for op, b, c in branches]
    parts.append(f"else: {_poly_src(last)}")
    return f"piecewise({', '.join(parts)})"


def _random_valley(rng: np.random.Generator, lo: float, hi: float) -> tuple[str, dict[str, bool]]:
    variant = rng.integers(3)  # 0: plateau min, 1: kink min, 2: jump into min
    m = float(rng.uniform(-1.0, 1.0))
    branches: list[tuple[str, float, np.ndarray]] = []

    if variant == 0:
        c1, c2 = _breakpoints(rng, lo, hi, 2)
        if c2 - c1 < 0.3:
            c1, c2 = max(lo + 0.2, c1 - 0.2), min(hi - 0.2, c2 + 0.2)
        left_end = m + (rng.uniform(0.05, 0.7) if rng.random() < 0.4 else 0.0)
        lcoefs, _ = _flank_piece(rng, lo, c1, left_end, -1)
        branches.append(("<", c1, lcoefs))
        branches.append(("<=", c2, np.array([m, 0.0, 0.0, 0.0])))
        right_start = m + (rng.uniform(0.05, 0.7) if rng.random() < 0.4 else 0.0)
        rcoefs, _ = _flank_piece(rng, c2, hi, right_start, +1)
        return _assemble(branches, rcoefs), _exp(True, False, True, True)

    c = _breakpoints(rng, lo, hi, 1)[0]
    if variant == 1:
        lcoefs, _ = _flank_piece(rng, lo, c, m, -1)
        branches.append(("<", c, lcoefs))
        rcoefs, _ = _flank_piece(rng, c, hi, m, +1)
        return _assemble(branches, rcoefs), _exp(True, True, True, True)

    jump = float(rng.uniform(0.05, 0.7))
    lcoefs, _ = _flank_piece(rng, lo, c, m + jump, -1)
    branches.append(("<", c, lcoefs))
    rcoefs, _ = _flank_piece(rng, c, hi, m, +1)
    return _assemble(branches, rcoefs), _exp(True, True, True, True)


def _random_monotone(rng: np.random.Generator, lo: float, hi: float) -> tuple[str, dict[str, bool]]:
    increasing = bool(rng.random() < 0.5)
    k = int(rng.integers(1, 4))
    bps = _breakpoints(rng, lo, hi, k)
    branches: list[tuple[str, float, np.ndarray]] = []
    if increasing:
        level = float(rng.uniform(-1.0, 1.0))
        prev = lo
        coefs_list = []
        for b in bps + [hi]:
            coefs, top = _flank_piece(rng, prev, b, level, +1)
            coefs_list.append(coefs)
            level = top + (float(rng.uniform(0.05, 0.6)) if rng.random() < 0.5 else 0.0)
            prev = b
        # up-jumps keep the breakpoint on the lower (left) piece
        branches = [("<=", b, c) for b, c in zip(bps, coefs_list[:-1])]
        return _assemble(branches, coefs_list[-1]), _exp(True, True, True, True)
    level = float(rng.uniform(-1.0, 1.0))
    prev = hi
    coefs_list = []
    for b in reversed([lo] + bps):
        coefs, top = _flank_piece(rng, b, prev, level, -1)
        coefs_list.append(coefs)
        level = top + (float(rng.uniform(0.05, 0.6)) if rng.random() < 0.5 else 0.0)
        prev = b
    coefs_list.reverse()
    # down-jumps keep the breakpoint on the lower (right) piece
    branches = [("<", b, c) for b, c in zip(bps, coefs_list[:-1])]
    return _assemble(branches, coefs_list[-1]), _exp(True, True, True, True)


def _random_arbitrary(rng: np.random.Generator, lo: float, hi: float) -> str:
    k = int(rng.integers(0, 4))
    bps = _breakpoints(rng, lo, hi, k) if k else []
    coefs = [rng.uniform(-1.0, 1.0, size=4) * np.array([1.0, 1.0, 0.6, 0.3])
             for _ in range(k + 1)]

    def val(c: np.ndarray, t: float) -> float:
        return float(((c[3] * t + c[2]) * t + c[1]) * t + c[0])

    branches: list[tuple[str, float, np.ndarray]] = []
    for i, b in enumerate(bps):
        left_limit = val(coefs[i], b)
        right_value = val(coefs[i + 1], b)
        # keep the breakpoint on whichever side is lower: that is what
        # lower semicontinuity demands at a jump
        op = "<" if right_value <= left_limit else "<="
        branches.append((op, b, coefs[i]))
    return _assemble(branches, coefs[-1])


def random_battery(
    count: int = 200, seed: int = 20260822, domain: str = "[-2,2]"
) -> tuple[BatteryEntry, ...]:
    """Seeded battery of lower-semicontinuous piecewise cubics."""
    from .domain import parse_interval

    iv = parse_interval(domain)
    lo, hi = iv.lo, iv.hi
    rng = np.random.default_rng(seed)
    out: list[BatteryEntry] = []
    for i in range(count):
        u = rng.random()
        if u < 0.40:
            expr, expected = _random_valley(rng, lo, hi)
            kind = "valley"
        elif u < 0.65:
            expr, expected = _random_monotone(rng, lo, hi)
            kind = "monotone"
        else:
            expr = _random_arbitrary(rng, lo, hi)
            expected = None
            kind = "arbitrary"
        out.append(
            BatteryEntry(
                id=f"rand-{seed}-{i:03d}", expression=expr, arity=1,
                domain=domain, lsc=True, radially_continuous=False,
                expected=expected, tags=("random", kind),
            )
        )
    return tuple(out)


def write_manifest(entries: tuple[BatteryEntry, ...], path: str | Path) -> None:
    data = {"version": 1, "entries": [asdict(x) for x in entries]}
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def load_manifest(path: str | Path) -> tuple[BatteryEntry, ...]:
    data = json.loads(Path(path).read_text())
    if data.get("version") != 1:
        raise ValueError(f"unsupported manifest version in {path}")
    entries = []
    for raw in data["entries"]:
        raw = dict(raw)
        if raw.get("box") is not None:
            raw["box"] = tuple(raw["box"])
        if raw.get("pairs") is not None:
            raw["pairs"] = tuple(
                (tuple(p[0]), tuple(p[1])) for p in raw["pairs"]
            )
        raw["tags"] = tuple(raw.get("tags", ()))
        entries.append(BatteryEntry(**raw))
    return tuple(entries)


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "battery/golden.json"
    write_manifest(golden_battery(), target)
    print(f"wrote {target}")
