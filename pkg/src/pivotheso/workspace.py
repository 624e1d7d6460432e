"""Workspace: configuration, file-backed store, atomic persistence.

One workspace owns one store file. Writes go to a temp file in the same
directory and are renamed into place, so a crash leaves either the old or
the new bytes, never a torn file. CLI mutations additionally take an
exclusive file lock so concurrent invocations serialize.
"""

from __future__ import annotations

import os
import tempfile
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from filelock import FileLock

from .errors import ConfigError
from .storefile import read_store, write_store
from .store import ThesaurusStore

ENV_STORE = "PIVOTHESO_STORE"
CONFIG_FILENAME = "pivotheso.conf"
DEFAULT_STORE = "store.json"
DEFAULT_LISTEN = "127.0.0.1:8321"


@dataclass
class WorkspaceConfig:
    store_path: Path = field(default_factory=lambda: Path(DEFAULT_STORE))
    ark_naan: str = "99999"
    ark_prefix: str = "pvt"
    default_lang: str = "fr"
    listen_address: str = DEFAULT_LISTEN
    ui_dir: Path | None = None

    def __post_init__(self):
        self.store_path = Path(self.store_path)
        if not self.store_path.parent.exists():
            raise ConfigError(f"store directory {self.store_path.parent} does not exist")
        host, sep, port = self.listen_address.rpartition(":")
        if not sep or not host or not port.isdigit() or not (0 < int(port) < 65536):
            raise ConfigError(f"listen_address {self.listen_address!r} is not host:port")

    @property
    def host(self) -> str:
        return self.listen_address.rpartition(":")[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rpartition(":")[2])


def parse_config_file(path: Path) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    values: dict[str, str] = {}
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key=value, got {raw!r}")
        values[key.strip()] = value.strip()
    return values


def load_config(
    store_override: str | None = None,
    config_path: Path | None = None,
    cwd: Path | None = None,
) -> WorkspaceConfig:
    """Resolve configuration: CLI flag > PIVOTHESO_STORE env > config file > defaults."""
    cwd = cwd or Path.cwd()
    raw: dict[str, str] = {}
    path = config_path if config_path is not None else cwd / CONFIG_FILENAME
    if path.exists():
        raw = parse_config_file(path)
    store = store_override or os.environ.get(ENV_STORE) or raw.get("store_path") or str(cwd / DEFAULT_STORE)
    kwargs = dict(
        store_path=Path(store),
        ark_naan=raw.get("ark_naan", "99999"),
        ark_prefix=raw.get("ark_prefix", "pvt"),
        default_lang=raw.get("default_lang", "fr"),
        listen_address=raw.get("listen_address", DEFAULT_LISTEN),
    )
    if raw.get("ui_dir"):
        kwargs["ui_dir"] = Path(raw["ui_dir"])
    return WorkspaceConfig(**kwargs)


class Workspace:
    """A loaded store bound to its file."""

    def __init__(self, config: WorkspaceConfig):
        self.config = config
        self._write_lock = threading.Lock()
        self.store = self._load()

    def _load(self) -> ThesaurusStore:
        path = self.config.store_path
        if path.exists():
            return read_store(path.read_bytes())
        return ThesaurusStore(
            naan=self.config.ark_naan,
            prefix=self.config.ark_prefix,
            default_lang=self.config.default_lang,
        )

    def save(self) -> None:
        """Atomic write: temp file in the target directory, then rename."""
        data = write_store(self.store)
        directory = self.config.store_path.parent
        fd, tmp_name = tempfile.mkstemp(prefix=".pivotheso-", suffix=".tmp", dir=directory)
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, self.config.store_path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    @contextmanager
    def mutate(self):
        """Serialize a mutation and persist it on success."""
        with self._write_lock:
            yield self.store
            self.save()

    def file_lock(self) -> FileLock:
        return FileLock(str(self.config.store_path) + ".lock")
