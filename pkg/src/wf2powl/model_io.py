"""PNML for nets, a small JSON schema for POWL models, and DOT export.

POWL JSON
---------
Every node is an object with a ``type`` field:

* ``{"type": "transition", "label": "a"}``
* ``{"type": "silent"}``
* ``{"type": "xor", "children": [...]}`` (at least two children)
* ``{"type": "loop", "do": {...}, "redo": {...}}``
* ``{"type": "po", "children": [...], "order": [[i, j], ...]}``

Order indices are 0-based positions in ``children``. Any relation whose
closure is a strict order is accepted; the writer emits the transitive
reduction.
"""

from __future__ import annotations

import json
import warnings
import xml.etree.ElementTree as ET

from .errors import InvalidModel, InvalidNet, ParseError, Unsupported
from .petri import PetriNet, WorkflowNet
from .powl import Leaf, Loop, PartialOrder, PowlModel, StrictOrder, Xor
from .semantics import ReachabilityGraph

PTNET_TYPE = "http://www.pnml.org/version-2009/grammar/ptnet"
SILENT_ACTIVITY = "$invisible$"

_KNOWN = {
    "net": {"name", "page", "place", "transition", "arc", "toolspecific", "graphics",
            "finalmarkings", "declaration"},
    "page": {"name", "page", "place", "transition", "arc", "toolspecific", "graphics"},
    "place": {"name", "initialMarking", "graphics", "toolspecific"},
    "transition": {"name", "graphics", "toolspecific"},
    "arc": {"inscription", "graphics", "toolspecific", "arctype"},
}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _text(elem: ET.Element | None) -> str | None:
    """Text of the ``<text>`` child of ``elem`` (``None`` if missing)."""
    if elem is None:
        return None
    for child in elem:
        if _local(child.tag) == "text":
            return (child.text or "").strip()
    return None


def _child(elem: ET.Element, name: str) -> ET.Element | None:
    for child in elem:
        if _local(child.tag) == name:
            return child
    return None


class _Reader:
    def __init__(self, strict: bool) -> None:
        self.strict = strict
        self.places: list[str] = []
        self.transitions: dict[str, str | None] = {}
        self.arcs: list[tuple[str, str]] = []
        self.ids: set[str] = set()

    def unknown(self, where: str, elem: ET.Element) -> None:
        msg = f"unsupported element <{_local(elem.tag)}>"
        if self.strict:
            raise ParseError(msg, where)
        warnings.warn(f"{where}: {msg} ignored", stacklevel=4)

    def check_children(self, kind: str, elem: ET.Element, where: str) -> None:
        for child in elem:
            if _local(child.tag) not in _KNOWN[kind]:
                self.unknown(where, child)

    def node_id(self, elem: ET.Element, kind: str) -> str:
        nid = elem.get("id")
        if not nid:
            raise ParseError(f"{kind} without id")
        if nid in self.ids:
            raise ParseError(f"duplicate id {nid!r}", f"{kind} {nid!r}")
        self.ids.add(nid)
        return nid

    def container(self, elem: ET.Element, kind: str, where: str) -> None:
        self.check_children(kind, elem, where)
        for child in elem:
            tag = _local(child.tag)
            if tag == "page":
                self.container(child, "page", f"page {child.get('id', '?')!r}")
            elif tag == "place":
                pid = self.node_id(child, "place")
                self.check_children("place", child, f"place {pid!r}")
                self.places.append(pid)
            elif tag == "transition":
                self.transition(child)
            elif tag == "arc":
                self.arc(child)

    def transition(self, elem: ET.Element) -> None:
        tid = self.node_id(elem, "transition")
        where = f"transition {tid!r}"
        self.check_children("transition", elem, where)
        flagged = any(
            _local(c.tag) == "toolspecific" and c.get("activity") == SILENT_ACTIVITY
            for c in elem
        )
        name = _text(_child(elem, "name"))
        if flagged:
            label = None
        elif name:
            label = name
        elif self.strict:
            raise ParseError("unnamed transition without an explicit silent flag", where)
        else:
            label = None
        self.transitions[tid] = label

    def arc(self, elem: ET.Element) -> None:
        aid = elem.get("id", "?")
        where = f"arc {aid!r}"
        self.check_children("arc", elem, where)
        src, tgt = elem.get("source"), elem.get("target")
        if not src or not tgt:
            raise ParseError("arc needs source and target", where)
        weight = _text(_child(elem, "inscription"))
        if weight is not None:
            try:
                value = int(weight)
            except ValueError:
                raise Unsupported(f"arc inscription {weight!r} is not an integer", where) from None
            if value != 1:
                raise Unsupported(f"arc weight {value} (only weight 1 is supported)", where)
        arctype = _child(elem, "arctype")
        if arctype is not None and _text(arctype) not in (None, "normal"):
            raise Unsupported(f"arc type {_text(arctype)!r}", where)
        self.arcs.append((src, tgt))


def parse_pnml(data: bytes | str, *, strict: bool = False) -> PetriNet:
    """Read the first ``<net>`` of a PNML document.

    A transition is silent when it carries the tool-specific flag
    ``activity="$invisible$"``; without strict mode a missing or empty name
    also makes it silent. Unknown elements are errors in strict mode and
    warnings otherwise.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        reason = str(exc).split(": line ")[0]
        raise ParseError(f"malformed XML: {reason}", f"line {line}, column {col}") from None
    if _local(root.tag) != "pnml":
        raise ParseError(f"root element is <{_local(root.tag)}>, expected <pnml>")
    nets = [c for c in root if _local(c.tag) == "net"]
    if not nets:
        raise ParseError("document contains no <net>")
    if len(nets) > 1:
        if strict:
            raise ParseError("document contains more than one <net>")
        warnings.warn("only the first <net> is read", stacklevel=2)
    reader = _Reader(strict)
    reader.container(nets[0], "net", f"net {nets[0].get('id', '?')!r}")
    try:
        return PetriNet(reader.places, reader.transitions, reader.arcs)
    except InvalidNet as exc:
        raise ParseError(str(exc)) from None


def write_pnml(net: PetriNet, name: str = "net") -> bytes:
    """Deterministic PNML bytes; ``parse_pnml`` gives back an equal net."""
    root = ET.Element("pnml", xmlns="http://www.pnml.org/version-2009/grammar/pnml")
    elem = ET.SubElement(root, "net", id=name, type=PTNET_TYPE)
    page = ET.SubElement(elem, "page", id="page0")
    source = net.source if isinstance(net, WorkflowNet) else None
    for p in sorted(net.places):
        pe = ET.SubElement(page, "place", id=p)
        ET.SubElement(ET.SubElement(pe, "name"), "text").text = p
        if p == source:
            ET.SubElement(ET.SubElement(pe, "initialMarking"), "text").text = "1"
    for t in sorted(net.transitions):
        te = ET.SubElement(page, "transition", id=t)
        label = net.transitions[t]
        if label is None:
            ET.SubElement(te, "toolspecific", tool="ProM", version="6.4", activity=SILENT_ACTIVITY)
        else:
            ET.SubElement(ET.SubElement(te, "name"), "text").text = label
    for i, (x, y) in enumerate(sorted(net.arcs)):
        ET.SubElement(page, "arc", id=f"arc{i}", source=x, target=y)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


# -- POWL JSON --------------------------------------------------------------

def _to_obj(model: PowlModel) -> dict:
    if isinstance(model, Leaf):
        if model.silent:
            return {"type": "silent"}
        return {"type": "transition", "label": model.label}
    if isinstance(model, Xor):
        return {"type": "xor", "children": [_to_obj(c) for c in model.children]}
    if isinstance(model, Loop):
        return {"type": "loop", "do": _to_obj(model.do), "redo": _to_obj(model.redo)}
    if isinstance(model, PartialOrder):
        return {
            "type": "po",
            "children": [_to_obj(c) for c in model.children],
            "order": [list(pair) for pair in sorted(model.order.reduction())],
        }
    raise TypeError(f"not a POWL model: {model!r}")


def write_powl_json(model: PowlModel) -> bytes:
    return (json.dumps(_to_obj(model), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _from_obj(obj, path: str) -> PowlModel:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    kind = obj.get("type")
    if kind == "transition":
        label = obj.get("label")
        if not isinstance(label, str) or not label:
            raise ParseError("transition needs a non-empty string label", path)
        return Leaf(label)
    if kind == "silent":
        return Leaf(None)
    if kind in ("xor", "po"):
        kids = obj.get("children")
        if not isinstance(kids, list):
            raise ParseError(f"{kind} needs a children list", path)
        children = [_from_obj(c, f"{path}.children[{i}]") for i, c in enumerate(kids)]
        if kind == "xor":
            try:
                return Xor(children)
            except InvalidModel as exc:
                raise ParseError(str(exc), path) from None
        pairs = obj.get("order", [])
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(i, int) for i in p)
            for p in pairs
        ):
            raise ParseError("order must be a list of [i, j] integer pairs", path)
        if len(children) < 2:
            raise ParseError(f"po needs at least 2 children, got {len(children)}", path)
        # NotStrict is raised as-is for cyclic orders
        return PartialOrder(children, StrictOrder(len(children), [tuple(p) for p in pairs]))
    if kind == "loop":
        if "do" not in obj or "redo" not in obj:
            raise ParseError("loop needs do and redo", path)
        return Loop(_from_obj(obj["do"], f"{path}.do"), _from_obj(obj["redo"], f"{path}.redo"))
    raise ParseError(f"unknown node type {kind!r}", path)


def parse_powl_json(data: bytes | str) -> PowlModel:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    return _from_obj(obj, "$")


# -- DOT --------------------------------------------------------------------

def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _net_dot(net: PetriNet) -> list[str]:
    lines = ["digraph net {", "  rankdir=LR;"]
    for p in sorted(net.places):
        lines.append(f"  {_q(p)} [shape=circle, label={_q(p)}];")
    for t in sorted(net.transitions):
        label = net.transitions[t]
        if label is None:
            lines.append(f"  {_q(t)} [shape=box, style=filled, fillcolor=black, label=\"\", width=0.2];")
        else:
            lines.append(f"  {_q(t)} [shape=box, label={_q(label)}];")
    for x, y in sorted(net.arcs):
        lines.append(f"  {_q(x)} -> {_q(y)};")
    lines.append("}")
    return lines


def _model_dot(model: PowlModel) -> list[str]:
    lines = ["digraph powl {"]
    counter = iter(range(1 << 30))

    def walk(m: PowlModel) -> str:
        node = f"n{next(counter)}"
        if isinstance(m, Leaf):
            label = "tau" if m.silent else m.label
            lines.append(f"  {node} [shape=box, label={_q(label)}];")
            return node
        if isinstance(m, Xor):
            lines.append(f"  {node} [shape=circle, label=\"xor\"];")
            for c in m.children:
                lines.append(f"  {node} -> {walk(c)};")
        elif isinstance(m, Loop):
            lines.append(f"  {node} [shape=circle, label=\"loop\"];")
            lines.append(f"  {node} -> {walk(m.do)} [label=\"do\"];")
            lines.append(f"  {node} -> {walk(m.redo)} [label=\"redo\"];")
        else:
            lines.append(f"  {node} [shape=circle, label=\"po\"];")
            kids = [walk(c) for c in m.children]
            for k in kids:
                lines.append(f"  {node} -> {k};")
            for a, b in sorted(m.order.reduction()):
                lines.append(f"  {kids[a]} -> {kids[b]} [style=dashed, constraint=false];")
        return node

    walk(model)
    lines.append("}")
    return lines


def _graph_dot(rg: ReachabilityGraph) -> list[str]:
    index = {m: i for i, m in enumerate(rg.states)}
    lines = ["digraph reachability {"]
    for m, i in index.items():
        shape = "doublecircle" if m == rg.initial else "ellipse"
        lines.append(f"  s{i} [shape={shape}, label={_q(str(m))}];")
    for a, t, b in sorted(rg.edges, key=lambda e: (index[e[0]], e[1], index[e[2]])):
        lines.append(f"  s{index[a]} -> s{index[b]} [label={_q(t)}];")
    lines.append("}")
    return lines


def to_dot(obj: PetriNet | PowlModel | ReachabilityGraph) -> str:
    if isinstance(obj, PetriNet):
        lines = _net_dot(obj)
    elif isinstance(obj, PowlModel):
        lines = _model_dot(obj)
    elif isinstance(obj, ReachabilityGraph):
        lines = _graph_dot(obj)
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as DOT")
    return "\n".join(lines) + "\n"


def _located(exc: ParseError, path: str) -> ParseError:
    where = f"{path}: {exc.location}" if exc.location else path
    msg = str(exc)
    if exc.location and msg.startswith(exc.location + ": "):
        msg = msg[len(exc.location) + 2:]
    return type(exc)(msg, where)


def read_net(path: str, *, strict: bool = False) -> PetriNet:
    """``parse_pnml`` on a file; parse errors carry the file name."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_pnml(data, strict=strict)
    except ParseError as exc:
        raise _located(exc, path) from None


def read_model(path: str) -> PowlModel:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_powl_json(data)
    except ParseError as exc:
        raise _located(exc, path) from None
