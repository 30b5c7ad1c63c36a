"""Reading and writing ``sprp-v1`` instance files (UTF-8 JSON)."""
from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path

from .numbers import json_number, parse_fraction
from .warehouse import (DECOUPLING, MULTIDEPOT, SCATTERED, STANDARD, DecouplingInstance,
                        Depot, Geometry, InstanceError, MultiDepotInstance,
                        ScatteredInstance, StandardInstance)

FORMAT = "sprp-v1"


def _required_block(rows):
    return {str(j): list(row) for j, row in enumerate(rows) if row}


def to_dict(instance) -> dict:
    geo = instance.geometry
    data = {
        "format": FORMAT,
        "variant": instance.variant,
        "geometry": {
            "num_aisles": geo.num_aisles,
            "positions_per_aisle": geo.positions_per_aisle,
            "cross_gap": [json_number(g) for g in geo.cross_gap],
            "depth": [json_number(y) for y in geo.depth],
            "aisle_length": json_number(geo.aisle_length),
        },
        "depot": {"aisle": instance.depot.aisle, "side": instance.depot.side},
    }
    if instance.variant in (STANDARD, MULTIDEPOT):
        data["required"] = _required_block(instance.required)
    if instance.variant == MULTIDEPOT:
        data["multidepot"] = {"candidates": [[d.aisle, d.side] for d in instance.sorted_candidates()]}
    if instance.variant == SCATTERED:
        data["scattered"] = {
            "demands": dict(instance.demand),
            "supply": [[j, i, h, s] for (j, i, h), s in instance.supply.items()],
        }
    if instance.variant == DECOUPLING:
        data["decoupling"] = {
            "capacity": instance.capacity,
            "beta": json_number(instance.beta),
            "demand_at": [[j, i, r] for (j, i), r in instance.demand_at.items()],
        }
    return data


def dumps(instance) -> str:
    return json.dumps(to_dict(instance), indent=2, sort_keys=False) + "\n"


def _required_rows(block, m):
    rows = [[] for _ in range(m)]
    for key, positions in block.items():
        j = int(key)
        if not 0 <= j < m:
            raise InstanceError(f"required positions in unknown aisle {j}")
        rows[j] = [int(i) for i in positions]
    return rows


def from_dict(data: dict):
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise InstanceError(f"unsupported format {fmt!r}")
    try:
        g = data["geometry"]
        geometry = Geometry(int(g["num_aisles"]), int(g["positions_per_aisle"]),
                            tuple(parse_fraction(x) for x in g["cross_gap"]),
                            tuple(parse_fraction(x) for x in g["depth"]),
                            parse_fraction(g["aisle_length"]))
        depot = Depot(int(data["depot"]["aisle"]), data["depot"]["side"])
        variant = data["variant"]
        if variant == STANDARD:
            return StandardInstance(geometry, depot, _required_rows(data["required"], geometry.num_aisles))
        if variant == MULTIDEPOT:
            cands = frozenset(Depot(int(a), s) for a, s in data["multidepot"]["candidates"])
            return MultiDepotInstance(geometry, depot,
                                      _required_rows(data["required"], geometry.num_aisles), cands)
        if variant == SCATTERED:
            block = data["scattered"]
            supply = {(int(j), int(i), str(h)): int(s) for j, i, h, s in block["supply"]}
            return ScatteredInstance(geometry, depot,
                                     {str(h): int(b) for h, b in block["demands"].items()}, supply)
        if variant == DECOUPLING:
            block = data["decoupling"]
            demand = {(int(j), int(i)): int(r) for j, i, r in block["demand_at"]}
            return DecouplingInstance(geometry, depot, demand, int(block["capacity"]),
                                      parse_fraction(block["beta"]))
    except KeyError as exc:
        raise InstanceError(f"missing field {exc}") from None
    raise InstanceError(f"unknown variant {variant!r}")


def loads(text: str):
    return from_dict(json.loads(text, parse_float=Decimal))


def load(path) -> object:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(instance, path) -> None:
    Path(path).write_text(dumps(instance), encoding="utf-8")
