from __future__ import annotations

from ..mip.model import BINARY, MipModel

# model symbol -> meaning; indices are (aisle,) or (aisle, position)
SYMBOLS = {
    "x2t": "top cross aisle to the next aisle traversed twice",
    "x2b": "bottom cross aisle to the next aisle traversed twice",
    "xtb": "top and bottom cross aisle to the next aisle traversed once each",
    "x2tb": "top and bottom cross aisle to the next aisle traversed twice each",
    "xu": "aisle traversed once",
    "x2u": "aisle traversed twice",
    "kt": "half degree at the top of the aisle",
    "kb": "half degree at the bottom of the aisle",
    "z": "partial tour up to the aisle has two components",
    "xpt": "vertical branch from the top down to the position",
    "xpb": "vertical branch from the bottom up to the position",
    "p": "position selected for picking",
    "g": "aisle reached",
    "wtr": "picker alone on the top cross aisle heading right",
    "wbr": "picker alone on the bottom cross aisle heading right",
    "wtl": "picker alone on the top cross aisle heading left",
    "wbl": "picker alone on the bottom cross aisle heading left",
    "xptp": "picker-alone branch from the top down to the position",
    "xpbp": "picker-alone branch from the bottom up to the position",
    "qt": "picker-alone load passing the top of the aisle",
    "qb": "picker-alone load passing the bottom of the aisle",
    "yt": "top cross aisle edge on the removed return path",
    "yb": "bottom cross aisle edge on the removed return path",
    "ytb": "top and bottom edges on the removed return path",
    "yu": "aisle traversal on the removed return path",
    "et": "end depot at the top of the aisle selected",
    "eb": "end depot at the bottom of the aisle selected",
    "ktp": "return path has even degree at the top of the aisle",
    "kbp": "return path has even degree at the bottom of the aisle",
}


def var_name(symbol: str, idx: tuple[int, ...]) -> str:
    return "_".join([symbol] + [str(i) for i in idx])


class VarMap:
    """Bijection between ``(symbol, indices)`` and model variable ids."""

    def __init__(self, model: MipModel):
        self.model = model
        self._ids: dict[tuple[str, tuple[int, ...]], int] = {}
        self._keys: dict[int, tuple[str, tuple[int, ...]]] = {}

    def add(self, symbol: str, *idx: int, kind: str = BINARY, lower: int = 0, upper: int = 1) -> int:
        if symbol not in SYMBOLS:
            raise KeyError(f"unknown symbol {symbol!r}")
        vid = self.model.add_var(var_name(symbol, idx), kind, lower, upper)
        self._ids[(symbol, idx)] = vid
        self._keys[vid] = (symbol, idx)
        return vid

    def __call__(self, symbol: str, *idx: int) -> int:
        return self._ids[(symbol, idx)]

    def get(self, symbol: str, *idx: int):
        return self._ids.get((symbol, idx))

    def has(self, symbol: str, *idx: int) -> bool:
        return (symbol, idx) in self._ids

    def key(self, vid: int) -> tuple[str, tuple[int, ...]]:
        return self._keys[vid]

    def items(self):
        return self._ids.items()

    def symbols(self) -> set[str]:
        return {s for s, _ in self._ids}

    def value(self, values, symbol: str, *idx: int) -> int:
        vid = self._ids.get((symbol, idx))
        return 0 if vid is None else values[vid]

    def named(self, assignment: dict) -> list[int]:
        """Full value vector from ``{(symbol, idx): value}``; the rest are zero."""
        values = [0] * self.model.num_vars
        for (symbol, idx), x in assignment.items():
            values[self(symbol, *idx)] = x
        return values

    def sidecar(self) -> str:
        lines = ["# name symbol indices"]
        for vid in range(self.model.num_vars):
            symbol, idx = self._keys[vid]
            lines.append(" ".join([self.model.variables[vid].name, symbol] + [str(i) for i in idx]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_sidecar(cls, model: MipModel, text: str) -> "VarMap":
        vmap = cls(model)
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            name, symbol, *idx = line.split()
            vid = model.var_id(name)
            key = (symbol, tuple(int(i) for i in idx))
            vmap._ids[key] = vid
            vmap._keys[vid] = key
        return vmap
