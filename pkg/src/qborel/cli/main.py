"""Batch command dispatch.

Every run executes one operation against an instance file or a packaged
example, prints a per-check pass/fail summary, and can store the full
certificate as JSON. Exit status: 0 all checks passed, 1 a check failed
or a library error was raised, 2 usage or parse problems.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import inf

from ..actions import cocycle_from_free_action, normalizer, orbit_equivalence
from ..carriers import format_intset, format_ptmap, IntSet, PiecewiseTranslation
from ..errors import QBorelError, UnsupportedCarrier
from ..feldman_moore import (
    classical_construction,
    cover_finite,
    cover_int,
    greedy_extend,
    greedy_extend_int,
    invert_map,
    levels_finite,
    levels_int,
    psi_split,
    psi_split_int,
    quotient_construction,
    quotient_construction_int,
    weak_uniformize,
    weak_uniformize_int,
)
from ..relations import (
    chain_witness,
    generate_equivalence,
    index2_involution,
    index_over,
    min_selector,
    tail_equivalence,
)
from .certificates import Certificate, jsonable, reverify
from .instance import InstanceFile, parse_instance_file

COMMANDS = (
    "fm-classical",
    "fm-quotient",
    "cover",
    "uniformize",
    "generate",
    "tail",
    "index",
    "selector",
    "involution2",
    "action-orbits",
    "cocycle",
    "normalizer",
    "gallery",
    "verify",
    "export-graph",
)

GALLERY_NAMES = ("ex34", "ex35", "ex36", "ex37", "et_shift")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qborel",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("command", nargs="?", help=f"one of: {', '.join(COMMANDS)}")
    p.add_argument("name", nargs="?", help="gallery name for the gallery command")
    p.add_argument("--cmd", help="command, alternative to the positional form")
    p.add_argument("--input", help="instance file (or certificate for verify)")
    p.add_argument("--out", help="write the certificate (or export) here")
    p.add_argument("--gallery", help="packaged example to draw inputs from")
    p.add_argument("--k", type=int, help="alphabet size for gallery models")
    p.add_argument("--n", type=int, help="word length for gallery models")
    p.add_argument("--t", type=int, help="agreement threshold for gallery models")
    p.add_argument("--K", type=int, default=32, help="level probe bound (int lane)")
    p.add_argument("--window", type=int, default=64, help="orbit probe window")
    p.add_argument("--rel", help="relation name in the instance file")
    p.add_argument("--maps", help="comma-separated map names")
    p.add_argument("--map", dest="map_", help="single map name")
    p.add_argument("--g0", help="seed partial injection name")
    p.add_argument("--action", help="action name in the instance file")
    p.add_argument("--group", help="group name in the instance file")
    p.add_argument("--sub", help="comma-separated subgroup elements (labels or indices)")
    p.add_argument("--phi", help="selector map name (default: least member)")
    p.add_argument("--x", type=int, help="chain witness source point")
    p.add_argument("--y", type=int, help="chain witness target point")
    p.add_argument("--expect", help="expected value for the index command")
    return p


def _load_instance(args) -> InstanceFile | None:
    if not args.input:
        return None
    return parse_instance_file(args.input)


def _pick(args, inst, table: dict, flag_value, directive_key: str, what: str):
    """A named object: flag first, then `set` directive, then sole entry."""
    name = flag_value
    if name is None and inst is not None:
        name = inst.directives.get(directive_key)
    if name is None and len(table) == 1:
        name = next(iter(table))
    if name is None:
        raise UsageError(f"no {what} selected; pass --{directive_key}")
    if name not in table:
        raise UsageError(f"{what} {name!r} not found in the instance")
    return table[name]


def _need_instance(inst, what: str) -> InstanceFile:
    if inst is None:
        raise UsageError(f"{what} needs --input with an instance file")
    return inst


def _map_list(args, inst) -> list:
    inst = _need_instance(inst, "this command")
    names = args.maps
    if names is None:
        names = inst.directives.get("maps")
    if names is None:
        raise UsageError("no maps selected; pass --maps name,name,...")
    out = []
    for name in (s.strip() for s in names.split(",")):
        if name not in inst.maps:
            raise UsageError(f"map {name!r} not found in the instance")
        out.append(inst.maps[name])
    if not out:
        raise UsageError("empty map list")
    kinds = {d.kind for d in out}
    if len(kinds) > 1:
        raise UsageError("maps must all live on the same carrier kind")
    return out


def _space_of(inst: InstanceFile, name: str):
    return inst.spaces[name].space


def _rel_partition(decl, cert: Certificate):
    """Partition of a finite relation declaration; verifies graph form."""
    if decl.kind == "partition":
        return decl.value
    if decl.kind != "graphs":
        raise UsageError("this command needs a finite relation")
    enum = decl.value
    cert.emit(
        "graphs_form_an_enumeration",
        "enumeration_laws",
        {"n": enum.n, "maps": [list(g) for g in enum.graphs]},
    )
    return enum.partition()


def _blocks_of(p) -> list:
    return [list(b) for b in p.blocks]


def _graph_pairs(f: dict) -> list:
    return sorted(f.items())


def _fmt_index(v) -> object:
    return "unbounded" if v == inf else v


# ---------------------------------------------------------------------------
# command handlers


def _gallery_instance(args, name=None):
    from ..cantor import example_gallery

    name = name or args.gallery or args.name
    if not name:
        raise UsageError(f"gallery needs a name: {', '.join(GALLERY_NAMES)}")
    return example_gallery(name, k=args.k, n=args.n, t=args.t)


def cmd_gallery(args, inst) -> Certificate:
    g = _gallery_instance(args, args.name or args.gallery)
    cert = Certificate("gallery", arguments={"name": g.name, **g.params})
    cert.add_input(f"gallery:{g.name}", json.dumps(g.params, sort_keys=True))
    cert.outputs = dict(g.summary)
    cert.emit(
        "instance_checks_hold",
        "gallery",
        {
            "name": g.name,
            **{key: g.params.get(key) for key in ("k", "n", "t")},
            "expected_checks": {c: True for c in g.checks},
        },
    )
    return cert


def cmd_fm_classical(args, inst) -> Certificate:
    inst = _need_instance(inst, "fm-classical")
    cert = Certificate("fm-classical")
    decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
    rel = _rel_partition(decl, cert)
    result = classical_construction(rel)
    invs = list(result.involutions.values())
    cert.outputs = {
        "classes": rel.num_classes,
        "bit_count": result.bit_count,
        "involutions": len(invs),
        "generators": [_graph_pairs(f) for f in result.generators],
    }
    blocks = _blocks_of(rel)
    cert.emit(
        "involutions_square_to_identity_within_relation",
        "involution_family_within",
        {"n": rel.n, "blocks": blocks, "maps": [_graph_pairs(f) for f in invs]},
    )
    cert.emit(
        "every_related_pair_on_a_single_involution",
        "pair_coverage",
        {"n": rel.n, "blocks": blocks, "maps": [_graph_pairs(f) for f in invs]},
    )
    cert.emit(
        "generators_generate_the_relation",
        "closure_partition",
        {
            "n": rel.n,
            "maps": [_graph_pairs(f) for f in result.generators],
            "blocks": blocks,
        },
    )
    return cert


def cmd_fm_quotient(args, inst) -> Certificate:
    cert = Certificate("fm-quotient")
    if args.gallery == "et_shift":
        g = _gallery_instance(args, "et_shift")
        rel, phis = g.data["relation"], g.data["maps"]
        return _fm_quotient_int(args, cert, rel, phis)
    inst = _need_instance(inst, "fm-quotient")
    decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
    if decl.kind == "blocks":
        phis = [d.table for d in _map_list(args, inst)]
        return _fm_quotient_int(args, cert, decl.value, phis)
    if decl.kind != "graphs":
        raise UsageError("fm-quotient needs a graphs relation")
    enum = decl.value
    qc = quotient_construction(enum)
    cert.outputs = {
        "classes": qc.relation.num_classes,
        "psi_count": len(qc.psis),
        "generators": [_graph_pairs(f) for f in qc.generators],
    }
    blocks = _blocks_of(qc.relation)
    cert.emit(
        "graphs_form_an_enumeration",
        "enumeration_laws",
        {"n": enum.n, "maps": [list(g) for g in enum.graphs]},
    )
    cert.emit(
        "generators_are_bijections_within_relation",
        "bijection_family_within",
        {
            "n": qc.relation.n,
            "blocks": blocks,
            "maps": [_graph_pairs(f) for f in qc.generators],
        },
    )
    cert.emit(
        "generated_orbit_equals_relation",
        "partition_equal",
        {"n": qc.relation.n, "left": _blocks_of(qc.orbit), "right": blocks},
    )
    return cert


def _fm_quotient_int(args, cert, rel, phis) -> Certificate:
    qc = quotient_construction_int(rel, phis, bound=args.K)
    gen_texts = [format_ptmap(f) for f in qc.generators]
    blocks = [format_intset(b) for b in rel.blocks]
    ambient = format_intset(rel.ambient)
    cert.outputs = {
        "psi_count": len(qc.psis),
        "generators": gen_texts,
    }
    cert.emit(
        "generators_are_bijections_within_relation",
        "ptmap_family_within",
        {"maps": gen_texts, "blocks": blocks, "ambient": ambient, "bijections": True},
    )
    cert.emit(
        "orbit_covers_relation_on_window",
        "int_orbit_window",
        {
            "maps": gen_texts,
            "blocks": blocks,
            "ambient": ambient,
            "window": args.window,
        },
    )
    return cert


def cmd_cover(args, inst) -> Certificate:
    cert = Certificate("cover")
    if args.gallery == "et_shift" or (inst is None and args.gallery is None):
        g = _gallery_instance(args, args.gallery or "et_shift")
        if g.name != "et_shift":
            raise UsageError("only the et_shift gallery instance feeds cover")
        return _cover_int(args, cert, g.data["relation"], g.data["maps"], g.data["seed"])
    inst = _need_instance(inst, "cover")
    decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
    g0_decl = _pick(args, inst, inst.maps, args.g0, "g0", "seed map")
    if decl.kind == "blocks":
        phis = [d.table for d in _map_list(args, inst)]
        return _cover_int(args, cert, decl.value, phis, g0_decl.table)
    if decl.kind != "graphs":
        raise UsageError("cover needs a graphs relation (or an int blocks one)")
    enum = decl.value
    cert.emit(
        "graphs_form_an_enumeration",
        "enumeration_laws",
        {"n": enum.n, "maps": [list(g) for g in enum.graphs]},
    )
    rel = enum.partition()
    blocks = _blocks_of(rel)
    g0 = dict(g0_decl.table)
    psis = psi_split(enum.graph_dicts(), enum.n)
    g = greedy_extend(g0, psis, enum.n, rel)
    pair = cover_finite(levels_finite(g, enum.n, rel))
    first, second = pair.first, pair.second
    cert.outputs = {
        "extension": _graph_pairs(g),
        "first": _graph_pairs(first),
        "second": _graph_pairs(second),
    }
    cert.emit(
        "seed_within_relation",
        "finite_graph_in_partition",
        {"n": rel.n, "blocks": blocks, "map": _graph_pairs(g0)},
    )
    cert.emit(
        "extension_is_a_full_permutation",
        "finite_levels_empty",
        {"n": rel.n, "map": _graph_pairs(g)},
    )
    cert.emit(
        "covers_are_bijections_within_relation",
        "bijection_family_within",
        {
            "n": rel.n,
            "blocks": blocks,
            "maps": [_graph_pairs(first), _graph_pairs(second)],
        },
    )
    others = [_graph_pairs(first), _graph_pairs(second)]
    for label, f in (
        ("seed", g0),
        ("seed_inverse", invert_map(g0)),
        ("extension", g),
        ("extension_inverse", invert_map(g)),
    ):
        cert.emit(
            f"{label}_inside_cover_union",
            "finite_graph_subset",
            {"left": _graph_pairs(f), "others": others},
        )
    return cert


def _cover_int(args, cert, rel, phis, g0) -> Certificate:
    blocks = [format_intset(b) for b in rel.blocks]
    ambient = format_intset(rel.ambient)
    psis = psi_split_int(phis)
    g = greedy_extend_int(g0, psis, rel.ambient, rel)
    levels = levels_int(g, rel, bound=args.K)
    pair = cover_int(levels)
    gp, gpp = pair.first, pair.second
    cert.outputs = {
        "extension": format_ptmap(g),
        "levels": {
            "x1": format_intset(levels.positive.level(1)),
            "xm1": format_intset(levels.negative.level(1)),
            "zero": format_intset(levels.zero),
            "positive_acceleration": levels.positive.accel,
            "negative_acceleration": levels.negative.accel,
        },
        "first": format_ptmap(gp),
        "second": format_ptmap(gpp),
    }
    cert.emit(
        "seed_within_relation",
        "ptmap_within_blocks",
        {"map": format_ptmap(g0), "blocks": blocks, "ambient": ambient},
    )
    cert.emit(
        "levels_reproduce",
        "int_levels",
        {
            "g": format_ptmap(g),
            "blocks": blocks,
            "ambient": ambient,
            "expected": {
                "x1": format_intset(levels.positive.level(1)),
                "xm1": format_intset(levels.negative.level(1)),
                "zero": format_intset(levels.zero),
            },
        },
    )
    cert.emit(
        "covers_are_bijections_within_relation",
        "ptmap_family_within",
        {
            "maps": [format_ptmap(gp), format_ptmap(gpp)],
            "blocks": blocks,
            "ambient": ambient,
            "bijections": True,
        },
    )
    others = [format_ptmap(gp), format_ptmap(gpp)]
    for label, f in (
        ("seed", g0),
        ("seed_inverse", g0.inverse()),
        ("extension", g),
        ("extension_inverse", g.inverse()),
    ):
        cert.emit(
            f"{label}_inside_cover_union",
            "ptmap_graph_subset",
            {"left": format_ptmap(f), "others": others},
        )
    return cert


def cmd_uniformize(args, inst) -> Certificate:
    inst = _need_instance(inst, "uniformize")
    cert = Certificate("uniformize")
    if args.rel or inst.rels:
        decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
    else:
        decl = None
    if decl is not None and decl.kind == "graphs":
        enum = decl.value
        fns = enum.graph_dicts()
        uni = weak_uniformize(enum.pairs(), fns)
        cert.outputs = {
            "selection": _graph_pairs(uni.phi),
            "indices": sorted(uni.index_of.items()),
        }
        cert.emit(
            "selection_is_least_covering_index",
            "least_cover_index",
            {
                "pairs": sorted(enum.pairs()),
                "maps": [_graph_pairs(f) for f in fns],
                "phi": _graph_pairs(uni.phi),
            },
        )
        return cert
    maps = [d.table for d in _map_list(args, inst)]
    if not isinstance(maps[0], PiecewiseTranslation):
        raise UsageError("uniformize without a graphs relation needs ptmaps")
    uni = weak_uniformize_int(maps, maps)
    texts = [format_ptmap(f) for f in maps]
    dom = IntSet.empty()
    for f in maps:
        dom = dom.union(f.domain())
    cert.outputs = {
        "selection": format_ptmap(uni.phi),
        "chosen_levels": [format_intset(s) for s in uni.levels],
    }
    cert.emit(
        "selection_inside_relation",
        "ptmap_graph_subset",
        {"left": format_ptmap(uni.phi), "others": texts},
    )
    cert.emit(
        "selection_total_on_domain",
        "intset_equal",
        {"left": format_intset(uni.phi.domain()), "right": format_intset(dom)},
    )
    cert.emit(
        "selection_is_least_covering_index",
        "int_least_index",
        {"maps": texts, "phi": format_ptmap(uni.phi)},
    )
    return cert


def cmd_generate(args, inst) -> Certificate:
    inst = _need_instance(inst, "generate")
    cert = Certificate("generate")
    decls = _map_list(args, inst)
    if decls[0].kind != "finite":
        raise UsageError("generate works on finite maps")
    n = _space_of(inst, decls[0].src).size
    maps = [d.table for d in decls]
    partition, layers = generate_equivalence(n, maps)
    cert.outputs = {
        "blocks": _blocks_of(partition),
        "stabilized_after": layers.stabilization_index,
    }
    if args.x is not None and args.y is not None:
        steps = chain_witness(layers, args.x, args.y)
        cert.outputs["chain"] = [s.describe() for s in steps]
    cert.emit(
        "closure_matches_generated_partition",
        "closure_partition",
        {
            "n": n,
            "maps": [_graph_pairs(f) for f in maps],
            "blocks": _blocks_of(partition),
        },
    )
    return cert


def cmd_tail(args, inst) -> Certificate:
    inst = _need_instance(inst, "tail")
    cert = Certificate("tail")
    decl = _pick(args, inst, inst.maps, args.map_, "map", "map")
    if decl.kind != "finite":
        raise UsageError("tail works on finite endomaps")
    n = _space_of(inst, decl.src).size
    if len(decl.table) != n:
        raise UsageError(f"map {decl.name!r} is not total")
    partition, _ = tail_equivalence(decl.table, n)
    cert.outputs = {"blocks": _blocks_of(partition)}
    cert.emit(
        "tail_classes_reproduce",
        "tail_partition",
        {
            "n": n,
            "map": _graph_pairs(decl.table),
            "blocks": _blocks_of(partition),
        },
    )
    return cert


def cmd_index(args, inst) -> Certificate:
    cert = Certificate("index")
    if args.gallery:
        g = _gallery_instance(args)
        rel = g.data.get("over") or g.data.get("orbit")
        if rel is None:
            raise UsageError(f"gallery {g.name} carries no indexed relation")
        value = index_over(rel)
    else:
        inst = _need_instance(inst, "index")
        decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
        if decl.kind == "graphs":
            value = index_over(decl.value.partition())
        else:
            value = index_over(decl.value)
    cert.outputs = {"index": _fmt_index(value)}
    if args.expect is not None:
        expected = args.expect if args.expect == "unbounded" else int(args.expect)
        cert.emit(
            "index_matches_expectation",
            "value_equal",
            {"left": _fmt_index(value), "right": expected},
        )
    return cert


def cmd_selector(args, inst) -> Certificate:
    inst = _need_instance(inst, "selector")
    cert = Certificate("selector")
    wants_action = not args.rel and (args.action or (not inst.rels and inst.actions))
    if wants_action:
        decl = _pick(args, inst, inst.actions, args.action, "action", "action")
        rel = orbit_equivalence(decl.action)
    else:
        decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
        rel = _rel_partition(decl, cert)
    if args.phi:
        if args.phi not in inst.maps:
            raise UsageError(f"map {args.phi!r} not found in the instance")
        phi = dict(inst.maps[args.phi].table)
    else:
        phi = min_selector(rel)
    cert.outputs = {
        "selector": _graph_pairs(phi),
        "transversal": sorted({phi[x] for x in phi}),
    }
    cert.emit(
        "selector_laws_hold",
        "selector_laws",
        {"n": rel.n, "blocks": _blocks_of(rel), "phi": _graph_pairs(phi)},
    )
    return cert


def cmd_involution2(args, inst) -> Certificate:
    inst = _need_instance(inst, "involution2")
    cert = Certificate("involution2")
    decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
    rel = _rel_partition(decl, cert)
    f = index2_involution(rel)
    cert.outputs = {"involution": _graph_pairs(f)}
    cert.emit(
        "squares_to_identity",
        "finite_involution",
        {"map": _graph_pairs(f)},
    )
    cert.emit(
        "graph_within_relation",
        "finite_graph_in_partition",
        {"n": rel.n, "blocks": _blocks_of(rel), "map": _graph_pairs(f)},
    )
    cert.emit(
        "orbit_equals_relation",
        "closure_partition",
        {"n": rel.n, "maps": [_graph_pairs(f)], "blocks": _blocks_of(rel)},
    )
    return cert


def cmd_action_orbits(args, inst) -> Certificate:
    inst = _need_instance(inst, "action-orbits")
    cert = Certificate("action-orbits")
    decl = _pick(args, inst, inst.actions, args.action, "action", "action")
    act = decl.action
    orbit = orbit_equivalence(act)
    gen_maps = [
        {x: act.act(a, x) for x in range(act.n)} for a in act.group.elements()
    ]
    cert.outputs = {
        "orbits": _blocks_of(orbit),
        "group": list(act.group.labels),
    }
    cert.emit(
        "orbits_equal_generated_closure",
        "closure_partition",
        {
            "n": act.n,
            "maps": [_graph_pairs(f) for f in gen_maps],
            "blocks": _blocks_of(orbit),
        },
    )
    return cert


def cmd_cocycle(args, inst) -> Certificate:
    cert = Certificate("cocycle")
    if args.gallery:
        g = _gallery_instance(args)
        act = g.data.get("action")
        if act is None:
            raise UsageError(f"gallery {g.name} carries no action")
    else:
        inst = _need_instance(inst, "cocycle")
        decl = _pick(args, inst, inst.actions, args.action, "action", "action")
        act = decl.action
    coc = cocycle_from_free_action(act)
    sizes = {
        act.group.labels[a]: len(p) for a, p in coc.pair_classes().items()
    }
    cert.outputs = {"pairs": len(coc.theta), "pair_class_sizes": sizes}
    cert.emit(
        "cocycle_laws_hold",
        "cocycle_laws",
        {
            "labels": list(act.group.labels),
            "table": [list(r) for r in act.group.table],
            "n": act.n,
            "maps": [list(r) for r in act.maps],
            "theta": [[x, y, a] for (x, y), a in sorted(coc.theta.items())],
        },
    )
    return cert


def cmd_normalizer(args, inst) -> Certificate:
    cert = Certificate("normalizer")
    if args.gallery:
        g = _gallery_instance(args)
        act = g.data.get("action")
        delta = g.data.get("sub")
        if act is None or delta is None:
            raise UsageError(f"gallery {g.name} carries no subgroup datum")
        group = act.group
        sub_text = args.sub or ",".join(str(a) for a in delta)
    else:
        inst = _need_instance(inst, "normalizer")
        decl = _pick(args, inst, inst.groups, args.group, "group", "group")
        group = decl.group
        if not args.sub and "sub" not in inst.directives:
            raise UsageError("normalizer needs --sub with subgroup elements")
        sub_text = args.sub or inst.directives["sub"]
    label_index = {lbl: i for i, lbl in enumerate(group.labels)}
    delta = []
    for part in (s.strip() for s in sub_text.split(",")):
        if part in label_index:
            delta.append(label_index[part])
        else:
            try:
                delta.append(int(part))
            except ValueError:
                raise UsageError(f"unknown group element {part!r}")
    norm = normalizer(group, delta)
    cert.outputs = {
        "normalizer": [group.labels[a] for a in norm],
        "delta": [group.labels[a] for a in sorted(set(delta))],
    }
    cert.emit(
        "normalizer_reproduces",
        "normalizer_value",
        {
            "labels": list(group.labels),
            "table": [list(r) for r in group.table],
            "delta": sorted(set(delta)),
            "expected": list(norm),
        },
    )
    if args.expect is not None:
        want = sorted(s.strip() for s in args.expect.split(","))
        cert.emit(
            "normalizer_matches_expectation",
            "value_equal",
            {"left": sorted(group.labels[a] for a in norm), "right": want},
        )
    return cert


def cmd_verify(args, inst) -> tuple[int, list[str]]:
    if not args.input:
        raise UsageError("verify needs --input with a certificate file")
    with open(args.input, encoding="utf-8") as fh:
        cert = Certificate.from_json(fh.read())
    agree, rows = reverify(cert)
    lines = [f"verify {args.input}: {len(rows)} stored checks"]
    for r in rows:
        mark = "pass" if r["agrees"] else "FAIL"
        lines.append(
            f"  [{mark}] {r['name']}: stored={r['stored']} recomputed={r['recomputed']}"
        )
    all_pass = agree and cert.ok
    lines.append(
        "verdicts reproduce and all checks pass"
        if all_pass
        else "verification failed"
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"agrees": agree, "rows": jsonable(rows)}, fh, indent=2)
            fh.write("\n")
    return (0 if all_pass else 1), lines


def cmd_export_graph(args, inst) -> tuple[int, list[str]]:
    inst = _need_instance(inst, "export-graph")
    lines = ["digraph orbits {"]
    if args.action or (not args.rel and inst.actions):
        decl = _pick(args, inst, inst.actions, args.action, "action", "action")
        act = decl.action
        for q in range(act.n):
            lines.append(f'  p{q} [label="{q}"];')
        for a in range(1, act.group.size):
            lbl = act.group.labels[a]
            for x in range(act.n):
                y = act.act(a, x)
                if x != y:
                    lines.append(f'  p{x} -> p{y} [label="{lbl}"];')
    else:
        decl = _pick(args, inst, inst.rels, args.rel, "rel", "relation")
        if decl.kind == "blocks":
            raise UnsupportedCarrier("graph export needs a finite quotient")
        if decl.kind == "graphs":
            enum = decl.value
            for q in range(enum.n):
                lines.append(f'  p{q} [label="{q}"];')
            for name, graph in zip(decl.graphs, enum.graphs):
                for x, y in graph:
                    if x != y:
                        lines.append(f'  p{x} -> p{y} [label="{name}"];')
        else:
            rel = decl.value
            for q in range(rel.n):
                lines.append(f'  p{q} [label="{q}"];')
            for block in rel.blocks:
                for x in block:
                    for y in block:
                        if x != y:
                            lines.append(f'  p{x} -> p{y} [label="{decl.name}"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return 0, [f"wrote {args.out}"]
    return 0, [text.rstrip()]


HANDLERS = {
    "fm-classical": cmd_fm_classical,
    "fm-quotient": cmd_fm_quotient,
    "cover": cmd_cover,
    "uniformize": cmd_uniformize,
    "generate": cmd_generate,
    "tail": cmd_tail,
    "index": cmd_index,
    "selector": cmd_selector,
    "involution2": cmd_involution2,
    "action-orbits": cmd_action_orbits,
    "cocycle": cmd_cocycle,
    "normalizer": cmd_normalizer,
    "gallery": cmd_gallery,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.cmd or args.command
    if command is None:
        parser.error("no command given")
    if command not in COMMANDS:
        parser.error(f"unknown command {command!r}; choose from: {', '.join(COMMANDS)}")
    try:
        if command == "verify":
            code, lines = cmd_verify(args, None)
            print("\n".join(lines))
            return code
        inst = _load_instance(args) if command != "gallery" else None
        if command == "export-graph":
            code, lines = cmd_export_graph(args, inst)
            print("\n".join(lines))
            return code
        cert = HANDLERS[command](args, inst)
    except UsageError as e:
        parser.error(str(e))
    except QBorelError as e:
        print(
            json.dumps(
                {
                    "error": {
                        "kind": type(e).__name__,
                        "message": str(e),
                        "witness": jsonable(getattr(e, "witness", None)),
                    }
                },
                indent=2,
            )
        )
        return 1
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            cert.add_input(os.path.basename(args.input), fh.read())
    print("\n".join(cert.summary_lines()))
    if cert.outputs:
        print("outputs:")
        for key, value in jsonable(cert.outputs).items():
            print(f"  {key} = {json.dumps(value)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_json())
        print(f"certificate written to {args.out}")
    return 0 if cert.ok else 1


if __name__ == "__main__":
    sys.exit(main())
