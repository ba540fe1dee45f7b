"""JSON documents for diagrams, graphs and surfaces, plus the binary state dump."""
import json
import logging

import numpy as np

from core.errors import ParseError
from core.phase import Phase, Scalar
from core.zx_diagram import ZxDiagram, port_end, spider_end

logger = logging.getLogger(__name__)


def convert_to_json_serializable(obj):
    """Convert numpy types to Python native types for JSON serialization"""
    if isinstance(obj, np.ndarray):
        return convert_to_json_serializable(obj.tolist())
    elif isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, (np.integer,)):
        return int(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, dict):
        return {str(key): convert_to_json_serializable(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_to_json_serializable(item) for item in obj]
    else:
        return obj


# ----- diagrams -----
def _end_to_json(end):
    return {"spider": end[1]} if end[0] == "s" else {"port": end[1]}


def _end_from_json(doc):
    if "spider" in doc:
        return spider_end(int(doc["spider"]))
    if "port" in doc:
        return port_end(int(doc["port"]))
    raise ParseError(f"wire endpoint must name a spider or a port: {doc!r}")


def diagram_to_json(d):
    spiders = []
    for sid, s in sorted(d.spiders.items()):
        entry = {"id": sid, "color": s.color,
                 "phase_num": s.phase.numerator, "phase_den_log2": s.phase.log2_denominator}
        if not s.phase.is_exact:
            entry["phase_float"] = s.phase.float_value
        spiders.append(entry)
    wires = [{"id": wid, "a": _end_to_json(w.a), "b": _end_to_json(w.b), "hadamard": w.hadamard}
             for wid, w in sorted(d.wires.items())]
    sc = d.scalar
    return {
        "spiders": spiders,
        "wires": wires,
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
        "scalar": {"zero": sc.is_zero, "half_power": sc.half_power, "eighth_root": sc.eighth_root,
                   "residual_re": sc.residual.real, "residual_im": sc.residual.imag},
    }


def diagram_from_json(doc):
    try:
        d = ZxDiagram()
        for entry in doc["spiders"]:
            if "phase_float" in entry:
                phase = Phase(is_exact=False, float_value=float(entry["phase_float"]))
            else:
                phase = Phase(int(entry["phase_num"]), int(entry.get("phase_den_log2", 0)))
            if entry["color"] not in ("Z", "X"):
                raise ParseError(f"unknown spider colour {entry['color']!r}")
            d.add_spider(entry["color"], phase, sid=int(entry["id"]))
        for p in list(doc["inputs"]) + list(doc["outputs"]):
            d.add_port(int(p))
        d.inputs = [int(p) for p in doc["inputs"]]
        d.outputs = [int(p) for p in doc["outputs"]]
        for k, entry in enumerate(doc["wires"]):
            d.add_wire(_end_from_json(entry["a"]), _end_from_json(entry["b"]),
                       bool(entry.get("hadamard", False)), wid=int(entry.get("id", k)))
        sc = doc.get("scalar", {})
        d.scalar = Scalar(is_zero=bool(sc.get("zero", False)), half_power=int(sc.get("half_power", 0)),
                          eighth_root=int(sc.get("eighth_root", 0)),
                          residual=complex(sc.get("residual_re", 1.0), sc.get("residual_im", 0.0)))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed diagram document: {e}") from e
    for p in d.ports:
        if len(d.incident(port_end(p))) != 1:
            raise ParseError(f"boundary port {p} must have exactly one wire")
    return d


def load_json(path):
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def dump_json(obj, path=None, indent=2):
    text = json.dumps(convert_to_json_serializable(obj), indent=indent)
    if path is None:
        return text
    with open(path, 'w') as f:
        f.write(text + "\n")
    return text


# ----- surfaces and curves -----
SURFACE_KINDS = ("dual_surface", "curve", "dual_curve")


def surface_from_json(doc):
    """(kind, sorted cell indices)"""
    kind = doc.get("kind")
    if kind not in SURFACE_KINDS:
        raise ParseError(f"unknown surface kind {kind!r}")
    try:
        cells = sorted(int(c) for c in doc.get("cells", []))
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad cell list: {e}") from e
    return kind, cells


def surface_to_json(kind, cells):
    return {"kind": kind, "cells": sorted(int(c) for c in cells)}


# ----- binary state dump -----
def dump_state(psi, path):
    """u32 qubit count, then (re, im) little-endian float64 pairs"""
    psi = np.asarray(psi, dtype=np.complex128)
    n = psi.shape[0].bit_length() - 1
    if 1 << n != psi.shape[0]:
        raise ValueError(f"state length {psi.shape[0]} is not a power of two")
    with open(path, 'wb') as f:
        f.write(np.array([n], dtype='<u4').tobytes())
        f.write(psi.astype('<c16').tobytes())
    logger.info(f"💾 wrote {n}-qubit state to {path}")
    return n


def load_state(path):
    with open(path, 'rb') as f:
        raw = f.read()
    if len(raw) < 4:
        raise ParseError(f"{path} is too short for a state dump")
    n = int(np.frombuffer(raw[:4], dtype='<u4')[0])
    body = np.frombuffer(raw[4:], dtype='<c16')
    if body.shape[0] != 1 << n:
        raise ParseError(f"{path}: header says {n} qubits but holds {body.shape[0]} amplitudes")
    return body.astype(np.complex128)
