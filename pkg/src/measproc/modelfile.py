"""JSON model files.

A model file is a JSON object::

    {
      "format": "measproc.model/1",
      "dim_s": 2,
      "dim_a": 2,
      "measured":    [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
      "probe":       [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
      "preparation": [[1, 0], [0, 0]],
      "interaction": [... 4x4 matrix ...],
      "amplifier":   {"gain": "G", "conjugate_gain": "G'", "conjugate_probe": [...]},
      "evolution":   {"hamiltonian": [...], "delay": 0.0, "hbar": 1.0}
    }

Every complex number is an ``[re, im]`` pair. ``amplifier`` and ``evolution``
are optional. Validation errors carry the line of the offending key.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg as la
from .amplifier import AmplifierSpec
from .errors import MeasurementError
from .hyperscalar import GainSymbol
from .model import MeasuringProcess
from .reduction import EvolutionSpec

FORMAT = "measproc.model/1"


class ModelFileError(MeasurementError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = source or "<model>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(m) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(m, dtype=complex)]


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


class _Reader:
    def __init__(self, text: str, source: str | None):
        self.text = text
        self.source = source

    def line_of(self, key: str) -> int | None:
        m = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        return None if m is None else self.text.count("\n", 0, m.start()) + 1

    def fail(self, key: str, message: str):
        raise ModelFileError(message, self.line_of(key), self.source)

    def number(self, key: str, value) -> complex:
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                           for x in value)):
            self.fail(key, f"{key}: complex entries must be [re, im] pairs, got {value!r}")
        return complex(value[0], value[1])

    def matrix(self, key: str, value, shape: tuple[int, int]) -> np.ndarray:
        if not isinstance(value, list) or len(value) != shape[0]:
            self.fail(key, f"{key}: expected {shape[0]} rows")
        rows = []
        for row in value:
            if not isinstance(row, list) or len(row) != shape[1]:
                self.fail(key, f"{key}: expected {shape[0]}x{shape[1]} matrix")
            rows.append([self.number(key, z) for z in row])
        return np.array(rows, dtype=complex).reshape(shape)

    def vector(self, key: str, value, dim: int) -> np.ndarray:
        if not isinstance(value, list) or len(value) != dim:
            self.fail(key, f"{key}: expected a vector of length {dim}")
        return np.array([self.number(key, z) for z in value], dtype=complex)

    def count(self, data: dict, key: str) -> int:
        if key not in data:
            raise ModelFileError(f"missing field {key!r}", None, self.source)
        v = data[key]
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            self.fail(key, f"{key} must be a positive integer, got {v!r}")
        return v

    def require(self, data: dict, key: str):
        if key not in data:
            raise ModelFileError(f"missing field {key!r}", None, self.source)
        return data[key]


@dataclass(frozen=True, eq=False)
class ModelFile:
    """A parsed model file: the measuring process plus optional extras."""

    process: MeasuringProcess
    gain: str | None = None
    conjugate_gain: str | None = None
    conjugate_probe: np.ndarray | None = None
    evolution: EvolutionSpec | None = None

    def amplifier_spec(self) -> AmplifierSpec:
        return AmplifierSpec(
            probe=self.process.probe,
            gain=GainSymbol(self.gain or "G"),
            conjugate_gain=GainSymbol(self.conjugate_gain) if self.conjugate_gain else None,
            conjugate_probe=self.conjugate_probe,
        )

    def to_dict(self) -> dict:
        mp = self.process
        out = {
            "format": FORMAT,
            "dim_s": mp.dim_s,
            "dim_a": mp.dim_a,
            "measured": encode_matrix(mp.measured.matrix),
            "probe": encode_matrix(mp.probe.matrix),
            "preparation": encode_vector(mp.preparation),
            "interaction": encode_matrix(mp.interaction),
        }
        if self.gain or self.conjugate_gain or self.conjugate_probe is not None:
            amp = {"gain": self.gain or "G"}
            if self.conjugate_gain:
                amp["conjugate_gain"] = self.conjugate_gain
            if self.conjugate_probe is not None:
                amp["conjugate_probe"] = encode_matrix(self.conjugate_probe)
            out["amplifier"] = amp
        if self.evolution is not None:
            out["evolution"] = {"hamiltonian": encode_matrix(self.evolution.hamiltonian),
                                "delay": self.evolution.delay, "hbar": self.evolution.hbar}
        return out

    def dumps(self) -> str:
        """Serialize with one matrix row per line; float repr round-trips exactly."""
        return _format(self.to_dict()) + "\n"


def _is_matrix(value) -> bool:
    return (isinstance(value, list) and value and isinstance(value[0], list)
            and value[0] and isinstance(value[0][0], list))


def _format(obj, indent: str = "") -> str:
    inner = indent + "  "
    if isinstance(obj, dict):
        items = [f"{inner}{json.dumps(k)}: {_format(v, inner)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    if _is_matrix(obj):
        rows = [inner + json.dumps(row) for row in obj]
        return "[\n" + ",\n".join(rows) + "\n" + indent + "]"
    return json.dumps(obj)


def loads(text: str, source: str | None = None) -> ModelFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"invalid JSON: {exc.msg} (column {exc.colno})",
                             exc.lineno, source) from None
    if not isinstance(data, dict):
        raise ModelFileError("model file must contain a JSON object", 1, source)
    r = _Reader(text, source)
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        r.fail("format", f"unsupported format {fmt!r}, expected {FORMAT!r}")

    ds, da = r.count(data, "dim_s"), r.count(data, "dim_a")
    measured = r.matrix("measured", r.require(data, "measured"), (ds, ds))
    probe = r.matrix("probe", r.require(data, "probe"), (da, da))
    prep = r.vector("preparation", r.require(data, "preparation"), da)
    u = r.matrix("interaction", r.require(data, "interaction"), (ds * da, ds * da))

    for key, m in (("measured", measured), ("probe", probe)):
        if not la.is_hermitian(m):
            r.fail(key, f"{key} observable not Hermitian")
    if abs(np.linalg.norm(prep) - 1) > la.TOL_NORM:
        r.fail("preparation", f"preparation not normalized (norm {np.linalg.norm(prep):.12g})")
    if not la.is_unitary(u):
        r.fail("interaction", "interaction not unitary")
    process = MeasuringProcess.from_matrices(measured, prep, u, probe)

    gain = conj_gain = None
    conj_probe = None
    if "amplifier" in data:
        amp = data["amplifier"]
        if not isinstance(amp, dict):
            r.fail("amplifier", "amplifier must be an object")
        gain = amp.get("gain", "G")
        conj_gain = amp.get("conjugate_gain")
        for key, name in (("gain", gain), ("conjugate_gain", conj_gain)):
            if name is not None and (not isinstance(name, str) or not name):
                r.fail(key, f"{key} must be a non-empty symbol name")
        if conj_gain is not None and conj_gain == gain:
            r.fail("conjugate_gain", "conjugate_gain must differ from gain")
        if "conjugate_probe" in amp:
            conj_probe = r.matrix("conjugate_probe", amp["conjugate_probe"], (da, da))

    evolution = None
    if "evolution" in data:
        evo = data["evolution"]
        if not isinstance(evo, dict):
            r.fail("evolution", "evolution must be an object")
        h = r.matrix("hamiltonian", r.require(evo, "hamiltonian"), (ds, ds))
        if not la.is_hermitian(h):
            r.fail("hamiltonian", "hamiltonian not Hermitian")
        delay, hbar = evo.get("delay", 0.0), evo.get("hbar", 1.0)
        for key, v in (("delay", delay), ("hbar", hbar)):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                r.fail(key, f"{key} must be a number")
        if delay < 0:
            r.fail("delay", "delay must be non-negative")
        if hbar <= 0:
            r.fail("hbar", "hbar must be positive")
        evolution = EvolutionSpec(h, float(delay), float(hbar))

    return ModelFile(process, gain, conj_gain, conj_probe, evolution)


def load(path: str | Path) -> ModelFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read model file: {exc.strerror}", None, str(path)) from None
    return loads(text, str(path))


def dumps(mp: MeasuringProcess, **extras) -> str:
    return ModelFile(mp, **extras).dumps()
