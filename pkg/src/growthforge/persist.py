"""Versioned persistence for built systems.

The file is canonical JSON (sorted keys, fixed separators, no timestamps)
holding the growth parameters, chooser, seed, per-level member choice tuples
(indices, never strings), the capture log, and a sha256 content digest.
Identical configurations therefore produce byte-identical files. Loading
re-derives every cached string and re-validates sizes, distinctness, and the
digest before handing the system to analysis code.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .construction import CaptureEntry, CSet, FreeParams, LevelSystem, WordRef
from .errors import SystemFileError
from .exactmath import parse_rational
from .growth import spec_from_dict

FORMAT_NAME = "growthforge-system"
FORMAT_VERSION = 1


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def document_digest(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "digest"}
    return "sha256:" + hashlib.sha256(canonical_json(body).encode()).hexdigest()


def system_to_document(system: LevelSystem) -> dict:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "growth": system.spec.describe(),
        "letters": system.alphabet.letters,
        "chooser": system.chooser,
        "seed": system.seed,
        "mode": system.mode,
        "depth": system.depth,
        "mu_offset": system.mu_offset,
        "horizon": system.horizon,
        "csets": [[list(ref.choices) for ref in cs.members] for cs in system.csets],
        "capture_log": [e.to_dict() for e in system.capture_log],
        "free_params": system.free_params.to_dict() if system.free_params else None,
    }
    doc["digest"] = document_digest(doc)
    return doc


def save_system(system: LevelSystem, path: str | Path) -> str:
    """Write the system file; returns its digest."""
    doc = system_to_document(system)
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return doc["digest"]


def load_system(path: str | Path) -> LevelSystem:
    """Read, digest-check, rebuild cached strings, and re-validate."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemFileError(f"cannot read system file {path}: {exc}") from exc
    if doc.get("format") != FORMAT_NAME:
        raise SystemFileError(f"{path}: not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise SystemFileError(f"{path}: unsupported version {doc.get('version')}")
    if doc.get("digest") != document_digest(doc):
        raise SystemFileError(f"{path}: digest mismatch, file was modified")

    spec = spec_from_dict(doc["growth"])
    system = LevelSystem(
        spec,
        chooser=doc["chooser"],
        seed=doc["seed"],
        letters=doc["letters"],
        mode=doc["mode"],
    )
    system.mu_offset = doc["mu_offset"]
    system.horizon = doc["horizon"]
    for level, tuples in enumerate(doc["csets"]):
        required = spec.ratio(level)
        if len(tuples) != required:
            raise SystemFileError(
                f"{path}: level {level} holds {len(tuples)} members, ratio demands {required}")
        members = []
        for raw in tuples:
            ref = WordRef(level, tuple(raw))
            _validate_ref(system, ref)
            members.append(ref)
        strings = [system.expand(ref) for ref in members]
        if len(set(strings)) != len(strings):
            raise SystemFileError(f"{path}: duplicate member words at level {level}")
        system.csets.append(CSet(level, members, strings))
    system.capture_log = [CaptureEntry.from_dict(e) for e in doc["capture_log"]]
    for entry in system.capture_log:
        ref = WordRef(entry.target_level, tuple(entry.target_choices))
        if system.expand(ref) != entry.target_word:
            raise SystemFileError(
                f"{path}: capture target {entry.target_word!r} does not match its reference")
    if doc["free_params"]:
        fp = doc["free_params"]
        system.free_params = FreeParams(
            epsilon=parse_rational(fp["epsilon"]),
            t=fp["t"],
            degree=fp["degree"],
            x_word=fp["x_word"],
            y_word=fp["y_word"],
            r_max=fp["r_max"],
        )
    if system.depth != doc["depth"]:
        raise SystemFileError(f"{path}: depth field {doc['depth']} != {system.depth} levels")
    return system


def _validate_ref(system: LevelSystem, ref: WordRef) -> None:
    for k, c in enumerate(ref.choices[:-1]):
        j = ref.level - 1 - k
        if not 0 <= c < len(system.csets[j]):
            raise SystemFileError(f"choice {c} out of range at level {j}")
    if not 0 <= ref.choices[-1] < system.alphabet.size:
        raise SystemFileError(f"letter index {ref.choices[-1]} out of range")
