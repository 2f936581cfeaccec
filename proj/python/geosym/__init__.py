"""Symbolic geometry program executor, verifier and augmentation tools."""

import json

try:
    from . import _geosym
except ImportError:  # in-tree build: the extension sits next to the package
    import _geosym

globals().update({k: getattr(_geosym, k) for k in dir(_geosym) if not k.startswith("_")})

GeosymError = _geosym.GeosymError


def load_records(path):
    """Reads a dataset file into a list of dicts, one per record."""
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def augment_record(record, probability, seed=0):
    """Augments a record dict; `probability` maps strategy names to firing probabilities."""
    return json.loads(_geosym.augment(json.dumps(record), probability, seed))


def select_record(record, level="semantic"):
    return _geosym.select(json.dumps(record), level)


def evaluate_records(records, mode="completion", verify=True, seed=0):
    return _geosym.evaluate([json.dumps(r) for r in records], mode, verify, seed)
