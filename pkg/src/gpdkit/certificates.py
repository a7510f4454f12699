"""Certificates: re-checkable structured reports and their canonical text form.

Input objects are referenced by ``sha256:<hex>`` digests of their canonical
serialization.  Certificate text is JSON with sorted keys and compact
separators, followed by a newline, so equal certificates are byte-identical.
"""

from dataclasses import dataclass
import hashlib
import json

from .errors import FormatError

KINDS = ("NonIsomorphism", "GenuinenessIngredients", "Isomorphism", "BisectionBasis")
DIGEST_ALGORITHM = "sha256"


def digest(text):
    return f"{DIGEST_ALGORITHM}:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _plain(obj):
    return json.loads(json.dumps(obj))


@dataclass(frozen=True)
class Certificate:
    kind: str
    inputs: dict
    witnesses: dict
    recheck: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        for name in ("inputs", "witnesses", "recheck"):
            object.__setattr__(self, name, _plain(getattr(self, name)))

    def to_json(self):
        return {"kind": self.kind, "inputs": self.inputs, "witnesses": self.witnesses,
                "recheck": self.recheck}

    def to_text(self):
        return canonical_json(self.to_json())

    @classmethod
    def from_text(cls, text):
        try:
            obj = json.loads(text)
            return cls(obj["kind"], obj["inputs"], obj["witnesses"], obj["recheck"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"not a certificate: {exc}") from None
