"""CPLEX-LP text export and plain-text solution exchange.

Export layout, byte for byte::

    Minimize
     obj: <terms>
    Subject To            (only when the model has constraints)
     <name>: <terms> <sense> <rhs>
    Bounds                (only for bounds other than 0 <= x <= 1 on binaries)
     <lo> <= <name> <= <hi>    or    <name> = <value>
    Binaries / Generals   (one variable per line)
    End

Terms read ``c x`` with the sign written as a separate ``+``/``-`` token,
coefficient 1 omitted, the first term without a leading ``+``. Numbers are the
shortest exact decimals. A constraint with a non-terminating coefficient is
multiplied by the lcm of its denominators; if the objective needs it, it is
scaled likewise and the factor recorded in a ``\\ objective scale: K``
comment line directly above ``Minimize``. Lines longer than 255 characters are
broken between terms, continuation lines start with two spaces.

Solution files hold one ``name value`` pair per line; ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from ..numbers import decimal_str, is_decimal, parse_fraction
from .model import BINARY, EQ, GE, INTEGER, LE, MipModel, ModelError

MAX_LINE = 255
INTEGRALITY_TOL = 1e-6


def _row_scale(coeffs) -> int:
    scale = 1
    for c in coeffs:
        if not is_decimal(c):
            scale = lcm(scale, Fraction(c).denominator)
    return scale


def _terms_tokens(model: MipModel, terms, scale=1) -> list[str]:
    tokens = []
    for k, (v, c) in enumerate(terms):
        c = c * scale
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = model.variables[v].name if mag == 1 else f"{decimal_str(mag)} {model.variables[v].name}"
        if k == 0:
            tokens.append(body if sign == "+" else f"- {body}")
        else:
            tokens.append(f"{sign} {body}")
    return tokens


def _wrap(head: str, tokens: list[str]) -> list[str]:
    lines = []
    line = head
    for tok in tokens:
        candidate = f"{line} {tok}" if line.strip() else f"{line}{tok}"
        if len(candidate) > MAX_LINE and line.strip():
            lines.append(line)
            line = f"  {tok}"
        else:
            line = candidate
    lines.append(line)
    return lines


def export_lp(model: MipModel) -> str:
    out: list[str] = []
    obj_scale = _row_scale(c for _, c in model.objective)
    if obj_scale != 1:
        out.append(f"\\ objective scale: {obj_scale}")
    out.append("Minimize")
    out.extend(_wrap(" obj:", _terms_tokens(model, model.objective, obj_scale)))
    if model.constraints:
        out.append("Subject To")
        for con in model.constraints:
            scale = _row_scale([c for _, c in con.terms] + [con.rhs])
            tokens = _terms_tokens(model, con.terms, scale)
            if not tokens:
                tokens = ["0 " + model.variables[0].name] if model.variables else ["0"]
            tokens += [con.sense, decimal_str(con.rhs * scale)]
            out.extend(_wrap(f" {con.name}:", tokens))
    bounds = []
    for var in model.variables:
        if var.kind == BINARY and (var.lower, var.upper) == (0, 1):
            continue
        if var.lower == var.upper:
            bounds.append(f" {var.name} = {var.lower}")
        else:
            bounds.append(f" {var.lower} <= {var.name} <= {var.upper}")
    if bounds:
        out.append("Bounds")
        out.extend(bounds)
    binaries = [v.name for v in model.variables if v.kind == BINARY]
    generals = [v.name for v in model.variables if v.kind == INTEGER]
    if binaries:
        out.append("Binaries")
        out.extend(f" {name}" for name in binaries)
    if generals:
        out.append("Generals")
        out.extend(f" {name}" for name in generals)
    out.append("End")
    return "\n".join(out) + "\n"


# -- independent reader used to verify exports --------------------------------

@dataclass
class ParsedLp:
    objective: dict[str, Fraction]
    objective_scale: int
    constraints: list[tuple[str, dict[str, Fraction], str, Fraction]]
    bounds: dict[str, tuple[Fraction, Fraction]]
    binaries: list[str]
    generals: list[str]


_SECTION = {"minimize": "obj", "subject to": "st", "bounds": "bounds",
            "binaries": "bin", "generals": "gen", "end": "end"}
_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?)?\s*([A-Za-z_][\w.\[\]]*)")


def _parse_expr(text: str) -> dict[str, Fraction]:
    terms: dict[str, Fraction] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ModelError(f"cannot parse LP expression near {text[pos:pos + 20]!r}")
        sign, coef, name = m.groups()
        value = parse_fraction(coef) if coef else Fraction(1)
        if sign == "-":
            value = -value
        terms[name] = terms.get(name, Fraction(0)) + value
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return terms


def parse_lp(text: str) -> ParsedLp:
    section = None
    scale = 1
    buffers: dict[str, list[str]] = {"obj": [], "st": [], "bounds": [], "bin": [], "gen": []}
    for raw in text.splitlines():
        if raw.startswith("\\"):
            m = re.match(r"\\ objective scale: (\d+)", raw)
            if m:
                scale = int(m.group(1))
            continue
        key = raw.strip().lower()
        if key in _SECTION:
            section = _SECTION[key]
            continue
        if section in (None, "end") or not raw.strip():
            continue
        if raw.startswith("  ") and buffers[section]:
            buffers[section][-1] += " " + raw.strip()
        else:
            buffers[section].append(raw.strip())
    obj_line = " ".join(buffers["obj"])
    obj_expr = obj_line.split(":", 1)[1] if ":" in obj_line else obj_line
    objective = _parse_expr(obj_expr)
    constraints = []
    for line in buffers["st"]:
        name, body = line.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+(?:\.\d+)?)\s*$", body)
        if not m:
            raise ModelError(f"cannot parse constraint {line!r}")
        expr, sense, rhs = m.groups()
        constraints.append((name.strip(), _parse_expr(expr), sense, parse_fraction(rhs)))
    bounds = {}
    for line in buffers["bounds"]:
        m = re.match(r"^(\S+)\s*=\s*(-?[\d.]+)$", line)
        if m:
            v = parse_fraction(m.group(2))
            bounds[m.group(1)] = (v, v)
            continue
        m = re.match(r"^(-?[\d.]+)\s*<=\s*(\S+)\s*<=\s*(-?[\d.]+)$", line)
        if not m:
            raise ModelError(f"cannot parse bound {line!r}")
        bounds[m.group(2)] = (parse_fraction(m.group(1)), parse_fraction(m.group(3)))
    return ParsedLp(objective, scale, constraints, bounds, buffers["bin"], buffers["gen"])


# -- solution exchange ---------------------------------------------------------

class SolutionFormatError(ValueError):
    pass


@dataclass
class ImportedSolution:
    values: dict[str, int]
    missing: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.missing


def read_solution(model: MipModel, text: str) -> ImportedSolution:
    known = {v.name for v in model.variables}
    values: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionFormatError(f"line {lineno}: expected 'name value', got {raw!r}")
        name, text_value = parts
        if name not in known:
            raise SolutionFormatError(f"line {lineno}: unknown variable {name!r}")
        try:
            value = float(text_value)
        except ValueError:
            raise SolutionFormatError(f"line {lineno}: bad number {text_value!r}") from None
        rounded = round(value)
        if abs(value - rounded) > INTEGRALITY_TOL:
            raise SolutionFormatError(f"line {lineno}: {name} = {text_value} is not integral")
        values[name] = int(rounded)
    missing = [v.name for v in model.variables if v.name not in values]
    for name in missing:
        values[name] = 0
    return ImportedSolution(values, missing)


def write_solution(model: MipModel, values, objective=None) -> str:
    lines = []
    if objective is not None:
        lines.append(f"# objective {decimal_str(objective) if is_decimal(objective) else objective}")
    for var, x in zip(model.variables, values):
        lines.append(f"{var.name} {x}")
    return "\n".join(lines) + "\n"


def lp_scale_factor(model: MipModel) -> int:
    return _row_scale(c for _, c in model.objective)


__all__ = ["export_lp", "parse_lp", "read_solution", "write_solution", "ImportedSolution",
           "SolutionFormatError", "ParsedLp", "EQ", "GE", "LE", "lp_scale_factor"]
