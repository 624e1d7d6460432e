"""Seedable ARK-style identifier minting.

Ids look like ``ark:/39676/bibxtjgnrpk5``: a name assigning authority number
(NAAN), a short producer prefix and ten characters from the Crockford base-32
alphabet (no i/l/o/u). Minting is deterministic for a given (seed, counter)
so identical edit sequences produce identical stores.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

ALPHABET = "0123456789abcdefghjkmnpqrstvwxyz"


@dataclass
class ArkMinter:
    naan: str = "99999"
    prefix: str = "pvt"
    seed: int = 0
    counter: int = 0

    def mint(self, taken: Callable[[str], bool] | None = None) -> str:
        """Return a fresh ark, skipping any id for which ``taken`` is true."""
        while True:
            digest = hashlib.sha256(f"{self.seed}:{self.counter}".encode()).digest()
            self.counter += 1
            local = "".join(ALPHABET[b % 32] for b in digest[:10])
            ark = f"ark:/{self.naan}/{self.prefix}{local}"
            if taken is None or not taken(ark):
                return ark
