"""Problem files: a line-oriented text format with exact rational literals.

Example::

    # P^1 x P^1, proportional pair
    [model]
    kind = multiproj
    factor_dims = 1 1

    [class alpha]
    coords = 1 1

    [class beta]
    coords = 2 2

    [task]
    type = equivalence
    alpha = alpha
    beta = beta

Polytope models use ``kind = polytope`` with ``dim = d`` and sections
``[polytope NAME]`` holding one ``vertex = x1 ... xd`` line per point.
Table models use ``kind = table`` with ``n``, ``basis_dim`` and lines
``entry = i1 ... in : value`` (1-based basis indices).  Float values are
accepted only in tables and switch the whole problem to approximate mode.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ._exact import to_fraction
from .analysis import PolytopeModel
from .errors import ContractError, KTError
from .intersection import ClassVector, MultiProjModel, TableModel, TableOracle
from .polytope import Polytope

TASK_TYPES = ("sequence", "inequalities", "equivalence", "signature", "scan")
_FLOAT_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


class ProblemError(KTError, ValueError):
    """Malformed problem file; the message carries the line number."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = "".join(f"{part}:" for part in (path, line) if part is not None)
        super().__init__(f"{where} {message}" if where else message)
        self.message = message
        self.line = line
        self.path = path


@dataclass
class Task:
    index: int
    type: str
    params: dict[str, str]
    line: int


@dataclass
class Problem:
    model: object
    classes: dict[str, object]
    tasks: list[Task]
    approximate: bool = False
    source: str = ""
    text: str = field(default="", repr=False)

    @property
    def kind(self) -> str:
        if isinstance(self.model, PolytopeModel):
            return "polytope"
        if isinstance(self.model, MultiProjModel):
            return "multiproj"
        return "table"


@dataclass
class _Section:
    kind: str
    name: str | None
    line: int
    fields: list[tuple[str, str, int]] = field(default_factory=list)

    def get(self, key: str, required: bool = True) -> tuple[str, int] | None:
        hits = [(v, ln) for k, v, ln in self.fields if k == key]
        if not hits:
            if required:
                raise ProblemError(f"section [{self.kind}] is missing field '{key}'", self.line)
            return None
        if len(hits) > 1:
            raise ProblemError(f"field '{key}' given more than once", hits[1][1])
        return hits[0]

    def all(self, key: str) -> list[tuple[str, int]]:
        return [(v, ln) for k, v, ln in self.fields if k == key]


def _split_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ProblemError("unterminated section header", lineno)
            head = line[1:-1].split()
            if not head:
                raise ProblemError("empty section header", lineno)
            if len(head) > 2:
                raise ProblemError(f"bad section header '{line}'", lineno)
            sections.append(_Section(head[0], head[1] if len(head) == 2 else None, lineno))
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProblemError(f"expected 'key = value', got '{line}'", lineno)
        if not sections:
            raise ProblemError("field outside of any section", lineno)
        sections[-1].fields.append((key.strip(), value.strip(), lineno))
    return sections


def _rational(token: str, line: int, allow_float: bool = False):
    if allow_float and "/" not in token and _FLOAT_RE.match(token) and any(c in token for c in ".eE"):
        return float(token)
    try:
        return to_fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"invalid rational literal '{token}': {exc}", line) from None


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ProblemError(f"{what} must be an integer, got '{token}'", line) from None


def _is_float_literal(token: str) -> bool:
    return "/" not in token and bool(_FLOAT_RE.match(token)) and any(c in token for c in ".eE")


def parse_problem(text: str, source: str = "<string>", tolerance: float = 1e-9) -> Problem:
    try:
        return _parse(text, source, tolerance)
    except ProblemError as exc:
        if source and exc.path is None:
            raise ProblemError(exc.message, exc.line, source) from None
        raise


def _parse(text: str, source: str, tolerance: float) -> Problem:
    sections = _split_sections(text)
    models = [s for s in sections if s.kind == "model"]
    if len(models) != 1:
        line = models[1].line if len(models) > 1 else None
        raise ProblemError(f"expected exactly one [model] section, found {len(models)}", line)
    msec = models[0]
    kind, kline = msec.get("kind")
    approximate = False

    if kind == "multiproj":
        value, ln = msec.get("factor_dims")
        dims = tuple(_int(t, ln, "factor_dims entry") for t in value.split())
        try:
            model = MultiProjModel(dims)
        except ContractError as exc:
            raise ProblemError(str(exc), ln) from None
    elif kind == "polytope":
        value, ln = msec.get("dim")
        dim = _int(value, ln, "dim")
        if dim < 1:
            raise ProblemError("dim must be positive", ln)
        model = PolytopeModel(dim)
    elif kind == "table":
        n_val, n_ln = msec.get("n")
        h_val, h_ln = msec.get("basis_dim")
        n = _int(n_val, n_ln, "n")
        h = _int(h_val, h_ln, "basis_dim")
        entries = []
        for value, ln in msec.all("entry"):
            idx_part, sep, val_part = value.partition(":")
            if not sep:
                raise ProblemError("table entry must look like 'i1 ... in : value'", ln)
            idx = [_int(t, ln, "table index") - 1 for t in idx_part.split()]
            token = val_part.strip()
            number = _rational(token, ln, allow_float=True)
            approximate |= isinstance(number, float)
            entries.append((idx, number, ln))
        try:
            oracle = TableOracle.from_entries(n, h, [(i, v) for i, v, _ in entries], tolerance)
        except ContractError as exc:
            raise ProblemError(f"invalid intersection table: {exc}", msec.line) from None
        model = TableModel(oracle)
    else:
        raise ProblemError(f"unknown model kind '{kind}' (expected multiproj, polytope or table)", kline)

    classes: dict[str, object] = {}
    for sec in sections:
        if sec.kind not in ("class", "polytope"):
            continue
        if sec.name is None:
            raise ProblemError(f"[{sec.kind}] section needs a name", sec.line)
        if sec.name in classes:
            raise ProblemError(f"duplicate class name '{sec.name}'", sec.line)
        if sec.kind == "class":
            if isinstance(model, PolytopeModel):
                raise ProblemError("polytope models take [polytope NAME] sections, not [class]", sec.line)
            value, ln = sec.get("coords")
            tokens = value.split()
            if any(_is_float_literal(t) for t in tokens) and not approximate:
                raise ProblemError("float literals are not accepted in exact mode", ln)
            coords = tuple(_rational(t, ln, allow_float=approximate) for t in tokens)
            if len(coords) != model.basis_dim:
                raise ProblemError(
                    f"class '{sec.name}' has {len(coords)} coordinates, model basis_dim is {model.basis_dim}", ln
                )
            classes[sec.name] = ClassVector(coords)
        else:
            if not isinstance(model, PolytopeModel):
                raise ProblemError("[polytope] sections need kind = polytope", sec.line)
            points = []
            for value, ln in sec.all("vertex"):
                tokens = value.split()
                if any(_is_float_literal(t) for t in tokens):
                    raise ProblemError("float literals are not accepted in exact mode", ln)
                pt = tuple(_rational(t, ln) for t in tokens)
                if len(pt) != model.dim:
                    raise ProblemError(f"vertex has {len(pt)} coordinates, model dim is {model.dim}", ln)
                points.append(pt)
            if not points:
                raise ProblemError(f"polytope '{sec.name}' has no vertices", sec.line)
            classes[sec.name] = Polytope(points)

    tasks = []
    for sec in sections:
        if sec.kind in ("model", "class", "polytope"):
            continue
        if sec.kind != "task":
            raise ProblemError(f"unknown section [{sec.kind}]", sec.line)
        ttype, tline = sec.get("type")
        if ttype not in TASK_TYPES:
            raise ProblemError(f"unknown task type '{ttype}' (expected one of {', '.join(TASK_TYPES)})", tline)
        params = {k: v for k, v, _ in sec.fields if k != "type"}
        for key in ("alpha", "beta"):
            if ttype in ("sequence", "inequalities", "equivalence"):
                name, ln = sec.get(key)
                if name not in classes:
                    raise ProblemError(f"task refers to unknown class '{name}'", ln)
        if ttype == "signature":
            if isinstance(model, PolytopeModel):
                raise ProblemError("signature tasks need a ring model (multiproj or table)", tline)
            got = sec.get("kahler", required=False)
            for name in (got[0].split() if got else []):
                if name not in classes:
                    raise ProblemError(f"task refers to unknown class '{name}'", got[1])
        if ttype == "scan":
            for key in ("samples", "seed"):
                got = sec.get(key, required=False)
                if got is not None:
                    _int(got[0], got[1], key)
        tasks.append(Task(len(tasks), ttype, params, sec.line))

    if not tasks:
        raise ProblemError("problem has no [task] sections")
    return Problem(model, classes, tasks, approximate, source, text)


def load_problem(path: str | Path, tolerance: float = 1e-9) -> Problem:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_problem(text, str(path), tolerance)
