"""Machine-checkable run records.

A certificate stores the command, digests of its inputs, the values it
produced, and a list of checks. Every check carries its kind plus the
data the checker needs, so verification can be repeated later from the
stored record alone: reverify() reruns each checker and compares the
verdicts with what was stored.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..carriers import IntSet, parse_intset, parse_ptmap
from ..errors import QBorelError
from ..quotient import Partition
from ..relations import (
    IntBlockRelation,
    generate_equivalence,
    verify_enumeration,
    verify_enumeration_int,
)

TOOL = "qborel"
VERSION = "0.1.0"

CHECKERS: dict[str, object] = {}


def checker(kind: str):
    def register(fn):
        CHECKERS[kind] = fn
        return fn
    return register


def run_check(kind: str, data: dict) -> tuple[bool, object]:
    if kind not in CHECKERS:
        raise ValueError(f"no checker registered for kind {kind!r}")
    ok, witness = CHECKERS[kind](data)
    return bool(ok), witness


def jsonable(value):
    """Best-effort conversion of witnesses and outputs to JSON values."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    return str(value)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


@dataclass
class Certificate:
    command: str
    arguments: dict = field(default_factory=dict)
    inputs: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tool: str = TOOL
    version: str = VERSION

    def add_input(self, name: str, text: str):
        self.inputs.append({"name": name, "sha256_12": digest(text)})

    def emit(self, name: str, kind: str, data: dict) -> bool:
        """Run the checker now and store the verdict alongside its data."""
        data = jsonable(data)
        ok, witness = run_check(kind, data)
        self.checks.append(
            {
                "name": name,
                "kind": kind,
                "data": data,
                "ok": ok,
                "witness": jsonable(witness),
            }
        )
        return ok

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_json(self) -> str:
        payload = {
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "arguments": jsonable(self.arguments),
            "inputs": self.inputs,
            "outputs": jsonable(self.outputs),
            "checks": self.checks,
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        raw = json.loads(text)
        return cls(
            command=raw["command"],
            arguments=raw.get("arguments", {}),
            inputs=raw.get("inputs", []),
            outputs=raw.get("outputs", {}),
            checks=raw.get("checks", []),
            tool=raw.get("tool", TOOL),
            version=raw.get("version", VERSION),
        )

    def summary_lines(self) -> list[str]:
        out = [f"{self.command}: {len(self.checks)} checks"]
        for c in self.checks:
            mark = "pass" if c["ok"] else "FAIL"
            tail = "" if c["ok"] else f"  witness: {c['witness']}"
            out.append(f"  [{mark}] {c['name']}{tail}")
        return out


def reverify(cert: Certificate) -> tuple[bool, list[dict]]:
    """Rerun every stored check; report agreement with stored verdicts."""
    rows = []
    agree = True
    for c in cert.checks:
        ok, witness = run_check(c["kind"], c["data"])
        same = ok == c["ok"]
        agree = agree and same
        rows.append(
            {
                "name": c["name"],
                "stored": c["ok"],
                "recomputed": ok,
                "agrees": same,
                "witness": jsonable(witness),
            }
        )
    return agree, rows


# ---------------------------------------------------------------------------
# checker kinds; data is always plain JSON values


def _pairs_to_map(pairs) -> dict[int, int]:
    return {int(x): int(y) for x, y in pairs}


def _blocks_partition(n: int, blocks) -> Partition:
    return Partition.from_blocks(n, [[int(x) for x in b] for b in blocks])


@checker("value_equal")
def _chk_value_equal(data):
    ok = data["left"] == data["right"]
    return ok, None if ok else {"left": data["left"], "right": data["right"]}


@checker("partition_equal")
def _chk_partition_equal(data):
    left = _blocks_partition(data["n"], data["left"])
    right = _blocks_partition(data["n"], data["right"])
    if left == right:
        return True, None
    for x in range(left.n):
        for y in range(x + 1, left.n):
            if left.same(x, y) != right.same(x, y):
                return False, (x, y)
    return False, None


@checker("closure_partition")
def _chk_closure_partition(data):
    maps = [_pairs_to_map(g) for g in data["maps"]]
    got, _ = generate_equivalence(data["n"], maps)
    want = _blocks_partition(data["n"], data["blocks"])
    if got == want:
        return True, None
    for x in range(got.n):
        for y in range(x + 1, got.n):
            if got.same(x, y) != want.same(x, y):
                return False, (x, y)
    return False, None


@checker("finite_bijection")
def _chk_finite_bijection(data):
    f = _pairs_to_map(data["map"])
    n = data["n"]
    if sorted(f) != list(range(n)):
        return False, "domain is not the whole point set"
    if sorted(f.values()) != list(range(n)):
        return False, "values do not exhaust the point set"
    return True, None


@checker("finite_involution")
def _chk_finite_involution(data):
    f = _pairs_to_map(data["map"])
    for x, y in f.items():
        if f.get(y) != x:
            return False, (x, y)
    return True, None


@checker("finite_graph_in_partition")
def _chk_graph_in_partition(data):
    rel = _blocks_partition(data["n"], data["blocks"])
    for x, y in _pairs_to_map(data["map"]).items():
        if not rel.same(x, y):
            return False, (x, y)
    return True, None


@checker("finite_graph_subset")
def _chk_finite_graph_subset(data):
    union = set()
    for g in data["others"]:
        union.update((int(x), int(y)) for x, y in g)
    for x, y in _pairs_to_map(data["left"]).items():
        if (x, y) not in union:
            return False, (x, y)
    return True, None


@checker("pair_coverage")
def _chk_pair_coverage(data):
    rel = _blocks_partition(data["n"], data["blocks"])
    maps = [_pairs_to_map(g) for g in data["maps"]]
    for block in rel.blocks:
        for x in block:
            for y in block:
                if x == y:
                    continue
                if not any(f.get(x) == y for f in maps):
                    return False, (x, y)
    return True, None


@checker("enumeration_laws")
def _chk_enumeration_laws(data):
    maps = [_pairs_to_map(g) for g in data["maps"]]
    report = verify_enumeration(maps, data["n"])
    return report.ok, None if report.ok else jsonable(vars(report))


@checker("selector_laws")
def _chk_selector_laws(data):
    from ..relations import selector_to_transversal

    rel = _blocks_partition(data["n"], data["blocks"])
    try:
        selector_to_transversal(_pairs_to_map(data["phi"]), rel)
        return True, None
    except QBorelError as e:
        return False, jsonable(e.witness)


@checker("least_cover_index")
def _chk_least_cover_index(data):
    pairs = {(int(x), int(y)) for x, y in data["pairs"]}
    maps = [_pairs_to_map(g) for g in data["maps"]]
    phi = _pairs_to_map(data["phi"])
    dom = {x for x, _ in pairs}
    if set(phi) != dom:
        return False, sorted(set(phi) ^ dom)
    for x, y in phi.items():
        if (x, y) not in pairs:
            return False, (x, y)
        chosen = next(
            (i for i, f in enumerate(maps) if f.get(x) is not None and (x, f[x]) in pairs),
            None,
        )
        if chosen is None or maps[chosen].get(x) != y:
            return False, (x, y, chosen)
    return True, None


@checker("word_value")
def _chk_word_value(data):
    from ..cantor import canonicalize, e0_equivalent, et_equivalent, parse_word

    k = data["k"]
    x = parse_word(data["x"], k)
    y = parse_word(data["y"], k)
    fn = {"e0": e0_equivalent, "et": et_equivalent}[data["relation"]]
    got = fn(x, y)
    return got == data["expected"], got


@checker("intset_equal")
def _chk_intset_equal(data):
    ok = parse_intset(data["left"]) == parse_intset(data["right"])
    return ok, None if ok else {"left": data["left"], "right": data["right"]}


@checker("ptmap_equal")
def _chk_ptmap_equal(data):
    ok = parse_ptmap(data["left"]) == parse_ptmap(data["right"])
    return ok, None if ok else {"left": data["left"], "right": data["right"]}


@checker("ptmap_total_bijection")
def _chk_ptmap_total_bijection(data):
    f = parse_ptmap(data["map"])
    ambient = parse_intset(data["ambient"])
    if f.domain() != ambient:
        return False, "domain differs from the ambient set"
    if f.range_set() != ambient:
        return False, "range differs from the ambient set"
    w = f.injectivity_witness()
    return w is None, w


@checker("ptmap_graph_subset")
def _chk_ptmap_graph_subset(data):
    left = parse_ptmap(data["left"])
    others = [parse_ptmap(t) for t in data["others"]]
    w = left.graph_subset_witness(*others)
    return w is None, w


@checker("ptmap_within_blocks")
def _chk_ptmap_within_blocks(data):
    rel = IntBlockRelation.make(
        [parse_intset(b) for b in data["blocks"]],
        ambient=parse_intset(data["ambient"]),
    )
    w = rel.graph_within_witness(parse_ptmap(data["map"]))
    return w is None, w


@checker("int_enumeration_laws")
def _chk_int_enumeration_laws(data):
    maps = [parse_ptmap(t) for t in data["maps"]]
    report = verify_enumeration_int(maps, parse_intset(data["ambient"]))
    return report.ok, None if report.ok else jsonable(vars(report))


@checker("int_orbit_window")
def _chk_int_orbit_window(data):
    from ..feldman_moore import orbit_window_witness

    rel = IntBlockRelation.make(
        [parse_intset(b) for b in data["blocks"]],
        ambient=parse_intset(data["ambient"]),
    )
    maps = [parse_ptmap(t) for t in data["maps"]]
    w = orbit_window_witness(rel, maps, window=data.get("window", 64))
    return w is None, w


@checker("int_levels")
def _chk_int_levels(data):
    from ..carriers import format_intset
    from ..feldman_moore import levels_int

    rel = IntBlockRelation.make(
        [parse_intset(b) for b in data["blocks"]],
        ambient=parse_intset(data["ambient"]),
    )
    levels = levels_int(parse_ptmap(data["g"]), rel)
    got = {
        "x1": format_intset(levels.positive.level(1)),
        "xm1": format_intset(levels.negative.level(1)),
        "zero": format_intset(levels.zero),
    }
    expected = data["expected"]
    mismatches = {
        key: {"got": got[key], "expected": expected[key]}
        for key in got
        if parse_intset(got[key]) != parse_intset(expected[key])
    }
    return not mismatches, mismatches or None


@checker("finite_levels_empty")
def _chk_finite_levels_empty(data):
    f = _pairs_to_map(data["map"])
    n = data["n"]
    first = sorted(set(f) - set(f.values()))
    last = sorted(set(f.values()) - set(f))
    ok = not first and not last and len(f) == n
    return ok, None if ok else {"unmatched_sources": first, "unmatched_targets": last}


@checker("int_least_index")
def _chk_int_least_index(data):
    from ..feldman_moore import weak_uniformize_int

    maps = [parse_ptmap(t) for t in data["maps"]]
    got = weak_uniformize_int(maps, maps).phi
    ok = got == parse_ptmap(data["phi"])
    return ok, None if ok else str(got)


@checker("involution_family_within")
def _chk_involution_family_within(data):
    rel = _blocks_partition(data["n"], data["blocks"])
    for i, g in enumerate(data["maps"]):
        f = _pairs_to_map(g)
        for x, y in f.items():
            if f.get(y) != x:
                return False, {"map": i, "pair": (x, y), "law": "involution"}
            if not rel.same(x, y):
                return False, {"map": i, "pair": (x, y), "law": "within"}
    return True, None


@checker("bijection_family_within")
def _chk_bijection_family_within(data):
    rel = _blocks_partition(data["n"], data["blocks"])
    n = data["n"]
    for i, g in enumerate(data["maps"]):
        f = _pairs_to_map(g)
        if sorted(f) != list(range(n)) or sorted(f.values()) != list(range(n)):
            return False, {"map": i, "law": "bijection"}
        for x, y in f.items():
            if not rel.same(x, y):
                return False, {"map": i, "pair": (x, y), "law": "within"}
    return True, None


@checker("ptmap_family_within")
def _chk_ptmap_family_within(data):
    rel = IntBlockRelation.make(
        [parse_intset(b) for b in data["blocks"]],
        ambient=parse_intset(data["ambient"]),
    )
    ambient = rel.ambient
    for i, text in enumerate(data["maps"]):
        f = parse_ptmap(text)
        if data.get("bijections") and (
            f.domain() != ambient or f.range_set() != ambient
        ):
            return False, {"map": i, "law": "bijection"}
        w = f.injectivity_witness()
        if w is not None:
            return False, {"map": i, "law": "injective", "witness": jsonable(w)}
        w = rel.graph_within_witness(f)
        if w is not None:
            return False, {"map": i, "law": "within", "witness": jsonable(w)}
    return True, None


@checker("tail_partition")
def _chk_tail_partition(data):
    from ..relations import tail_equivalence

    got, _ = tail_equivalence(_pairs_to_map(data["map"]), data["n"])
    want = _blocks_partition(data["n"], data["blocks"])
    ok = got == want
    return ok, None if ok else {"got": [list(b) for b in got.blocks]}


@checker("cocycle_laws")
def _chk_cocycle_laws(data):
    from ..actions import Cocycle, FiniteGroup, GroupAction, verify_cocycle

    group = FiniteGroup(
        tuple(data["labels"]), tuple(tuple(r) for r in data["table"])
    )
    action = GroupAction(
        group, data["n"], tuple(tuple(r) for r in data["maps"])
    )
    theta = {(int(x), int(y)): int(a) for x, y, a in data["theta"]}
    report = verify_cocycle(Cocycle(action, theta))
    ok = report.ok
    return ok, None if ok else {"moves": report.moves, "chains": report.chains}


@checker("normalizer_value")
def _chk_normalizer_value(data):
    from ..actions import FiniteGroup, normalizer

    group = FiniteGroup(
        tuple(data["labels"]), tuple(tuple(r) for r in data["table"])
    )
    got = list(normalizer(group, [int(a) for a in data["delta"]]))
    ok = got == [int(a) for a in data["expected"]]
    return ok, None if ok else got


@checker("gallery")
def _chk_gallery(data):
    from ..cantor import example_gallery

    instance = example_gallery(
        data["name"], k=data.get("k"), n=data.get("n"), t=data.get("t")
    )
    expected = {k: bool(v) for k, v in data["expected_checks"].items()}
    got = {k: bool(v) for k, v in instance.checks.items()}
    ok = got == expected
    return ok, None if ok else {"got": got, "expected": expected}
