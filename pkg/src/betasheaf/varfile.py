"""``.variety`` files: a line-oriented key/value format for custom varieties.

::

    # comment
    name: Fermat:5
    variables: a, b, z
    dimension: 2
    equations:
        a^5 - b^5 - z^5
    singular:
        a
        b
        z
    normal: true
    pole_vars: z
    constants: n=5, p=2
    alpha_seeds:
        2: (a*b)^{p}*da^db/z^{2*p}
    golden:
        alpha2_extra = ["(a*b)^{p}*da^db/z^{2*p}"]

Scalar keys take their value on the same line.  Block keys (``equations``,
``singular``, ``parametrization``, ``torus_chart``, ``named``,
``alpha_seeds``, ``l_presentation``, ``golden``) take indented lines.
Optional keys: ``parameters``, ``parametrization``, ``chart_parameters``,
``torus_chart``, ``deck`` (``order; w1, w2, ...``), ``maps``,
``pullback_seeds``.  Golden values are JSON.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .grammar import FormSyntaxError, format_function, parse_form
from .poly import MeroFunction, Polynomial
from .varieties import DeckGroup, VarietyError, VarietySpec

__all__ = ["VarfileError", "loads", "load", "dumps", "save"]

SCALAR = ("name", "variables", "dimension", "parameters", "chart_parameters", "deck", "normal",
          "pole_vars", "constants", "maps", "pullback_seeds")
BLOCK = ("equations", "singular", "parametrization", "torus_chart", "named", "alpha_seeds",
         "l_presentation", "golden")
REQUIRED = ("name", "variables", "dimension")


class VarfileError(VarietyError):
    def __init__(self, message: str, line_no: Optional[int] = None, key: Optional[str] = None):
        self.line_no, self.key = line_no, key
        where = []
        if line_no is not None:
            where.append(f"line {line_no}")
        if key is not None:
            where.append(f"field {key!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _sections(text: str) -> Dict[str, Tuple[int, object]]:
    out: Dict[str, Tuple[int, object]] = {}
    current = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace():
            if current is None:
                raise VarfileError("indented line outside a block", no)
            out[current][1].append((no, line.strip()))
            continue
        m = re.fullmatch(r"([A-Za-z_-]+)\s*:\s*(.*)", line)
        if not m:
            raise VarfileError(f"expected 'key: value', got {line!r}", no)
        key, value = m.group(1).replace("-", "_"), m.group(2).strip()
        if key in out:
            raise VarfileError("duplicate key", no, key)
        if key in BLOCK:
            if value:
                raise VarfileError("block keys take indented lines", no, key)
            out[key] = (no, [])
            current = key
        elif key in SCALAR:
            out[key] = (no, value)
            current = None
        else:
            raise VarfileError("unknown key", no, key)
    for key in REQUIRED:
        if key not in out:
            raise VarfileError("missing required key", None, key)
    return out


def _names(value: str) -> Tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _poly(text: str, vars, no: int, key: str) -> Polynomial:
    try:
        return parse_form(text, vars, (), "ambient", 0).coefficient(()).as_polynomial()
    except (FormSyntaxError, ValueError) as exc:
        raise VarfileError(f"bad polynomial {text!r}: {exc}", no, key) from None


def _mero(text: str, vars, no: int, key: str) -> MeroFunction:
    try:
        return parse_form(text, vars, vars, "ambient", 0).coefficient(())
    except (FormSyntaxError, ValueError) as exc:
        raise VarfileError(f"bad function {text!r}: {exc}", no, key) from None


def _keyed(lines, no, key, sep) -> List[Tuple[int, str, str]]:
    out = []
    for n, line in lines:
        if sep not in line:
            raise VarfileError(f"expected 'key {sep} value'", n, key)
        k, _, v = line.partition(sep)
        out.append((n, k.strip(), v.strip()))
    return out


def loads(text: str) -> VarietySpec:
    sec = _sections(text)
    get = lambda k, default=None: sec[k][1] if k in sec else default  # noqa: E731
    line = lambda k: sec[k][0] if k in sec else None  # noqa: E731
    vars = _names(get("variables"))
    if not vars:
        raise VarfileError("no variables", line("variables"), "variables")
    try:
        dim = int(get("dimension"))
    except ValueError:
        raise VarfileError("dimension must be an integer", line("dimension"), "dimension") from None
    eqs = tuple(_poly(t, vars, n, "equations") for n, t in get("equations", []))
    sing = tuple(_poly(t, vars, n, "singular") for n, t in get("singular", []))
    params = _names(get("parameters")) if "parameters" in sec else None
    parametrization = None
    if "parametrization" in sec:
        if params is None:
            raise VarfileError("parametrization needs 'parameters'", line("parametrization"), "parametrization")
        parametrization = tuple(_poly(t, params, n, "parametrization") for n, t in get("parametrization"))
    chart_params = _names(get("chart_parameters")) if "chart_parameters" in sec else None
    torus = None
    if "torus_chart" in sec:
        if chart_params is None:
            raise VarfileError("torus_chart needs 'chart_parameters'", line("torus_chart"), "torus_chart")
        torus = tuple(_mero(t, chart_params, n, "torus_chart") for n, t in get("torus_chart"))
    deck = None
    if "deck" in sec:
        order, _, weights = get("deck").partition(";")
        try:
            deck = DeckGroup(int(order), tuple(int(w) for w in _names(weights)))
        except ValueError:
            raise VarfileError("deck must read 'order; w1, w2, ...'", line("deck"), "deck") from None
    normal = get("normal", "false").lower()
    if normal not in ("true", "false"):
        raise VarfileError("normal must be true or false", line("normal"), "normal")
    constants = {}
    for item in _names(get("constants", "")):
        k, _, v = item.partition("=")
        try:
            constants[k.strip()] = int(v)
        except ValueError:
            raise VarfileError(f"bad constant {item!r}", line("constants"), "constants") from None
    named = {k: v for _, k, v in _keyed(get("named", []), line("named"), "named", "=")}

    def degree_map(key):
        out: Dict[int, List[str]] = {}
        for n, k, v in _keyed(get(key, []), line(key), key, ":"):
            try:
                out.setdefault(int(k), []).append(v)
            except ValueError:
                raise VarfileError(f"degree {k!r} is not an integer", n, key) from None
        return out

    golden = {}
    for n, k, v in _keyed(get("golden", []), line("golden"), "golden", "="):
        try:
            golden[k] = json.loads(v)
        except json.JSONDecodeError as exc:
            raise VarfileError(f"golden value is not JSON: {exc.msg}", n, "golden") from None
    try:
        spec = VarietySpec(
            id=get("name"), vars=vars, equations=eqs, dimension=dim, singular=sing,
            params=params, parametrization=parametrization, torus_chart=torus,
            chart_params=chart_params, deck=deck, normal=normal == "true",
            pole_vars=_names(get("pole_vars", "")), constants=constants, named_forms=named,
            alpha_seeds=degree_map("alpha_seeds"),
            l_presentation=degree_map("l_presentation") if "l_presentation" in sec else None,
            golden=golden, maps=_names(get("maps", "")), pullback_seeds=_names(get("pullback_seeds", "")),
        )
        return spec.validate()
    except VarfileError:
        raise
    except VarietyError as exc:
        raise VarfileError(str(exc), line("parametrization") or line("equations")) from None


def load(path: Union[str, Path]) -> VarietySpec:
    path = Path(path)
    if not path.exists():
        from .resources import data_dir

        shipped = data_dir() / path.name
        if path.parent == Path(".") and shipped.exists():
            path = shipped
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise VarfileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(spec: VarietySpec) -> str:
    if spec.factor is not None:
        raise VarfileError(f"{spec.id} is a product; refer to it as product(A,var)")
    out = [f"name: {spec.id}", f"variables: {', '.join(spec.vars)}", f"dimension: {spec.dimension}"]

    def block(key, items):
        if items:
            out.append(f"{key}:")
            out.extend(f"    {i}" for i in items)

    block("equations", [str(f) for f in spec.equations])
    block("singular", [str(f) for f in spec.singular])
    if spec.params is not None:
        out.append(f"parameters: {', '.join(spec.params)}")
    if spec.parametrization is not None:
        block("parametrization", [str(f) for f in spec.parametrization])
    if spec.chart_params is not None:
        out.append(f"chart_parameters: {', '.join(spec.chart_params)}")
    if spec.torus_chart is not None:
        block("torus_chart", [format_function(f) for f in spec.torus_chart])
    if spec.deck is not None:
        out.append(f"deck: {spec.deck.order}; {', '.join(map(str, spec.deck.weights))}")
    out.append(f"normal: {'true' if spec.normal else 'false'}")
    if spec.pole_vars:
        out.append(f"pole_vars: {', '.join(spec.pole_vars)}")
    if spec.constants:
        out.append("constants: " + ", ".join(f"{k}={v}" for k, v in sorted(spec.constants.items())))
    block("named", [f"{k} = {v}" for k, v in sorted(spec.named_forms.items())])
    block("alpha_seeds", [f"{q}: {g}" for q in sorted(spec.alpha_seeds) for g in spec.alpha_seeds[q]])
    if spec.l_presentation is not None:
        out.append("l_presentation:")
        out.extend(f"    {q}: {g}" for q in sorted(spec.l_presentation) for g in spec.l_presentation[q])
    block("golden", [f"{k} = {json.dumps(v)}" for k, v in sorted(spec.golden.items())])
    if spec.maps:
        out.append(f"maps: {', '.join(spec.maps)}")
    if spec.pullback_seeds:
        out.append(f"pullback_seeds: {', '.join(spec.pullback_seeds)}")
    return "\n".join(out) + "\n"


def save(spec: VarietySpec, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.write_text(dumps(spec), encoding="utf-8")
    except OSError as exc:
        raise VarfileError(f"cannot write {path}: {exc.strerror}") from None
    return path
