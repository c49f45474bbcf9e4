"""Run manifest: configuration snapshot plus per-stage output digests.

Every pipeline stage records its parameters, derived seed, and the SHA-256
of each file it wrote, so any stage can be replayed independently and its
outputs verified byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_atomic(path: str | Path, data: str | bytes) -> None:
    """Write via a temp file + rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunManifest:
    master_seed: int
    tool_version: str
    config: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict)
    path: Path | None = None

    def record_stage(
        self,
        name: str,
        *,
        seed: int | None,
        params: Mapping,
        inputs: list[str] | None = None,
        outputs: list[str | Path] | None = None,
        root: str | Path | None = None,
    ) -> None:
        """Register a stage with digests of everything it wrote.

        Output paths are stored relative to ``root`` (the manifest's
        directory by default) so runs compare across locations.
        """
        root = Path(root) if root else (self.path.parent if self.path else Path("."))
        digests = {}
        for out in outputs or []:
            out = Path(out)
            try:
                key = str(out.relative_to(root))
            except ValueError:
                key = str(out)
            digests[key] = sha256_file(out)
        self.stages[name] = {
            "seed": seed,
            "params": dict(params),
            "inputs": list(inputs or []),
            "outputs": digests,
        }

    def to_dict(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "tool_version": self.tool_version,
            "config": self.config,
            "stages": self.stages,
        }

    def save(self, path: str | Path | None = None) -> Path:
        path = Path(path) if path else self.path
        if path is None:
            raise ValueError("manifest has no path")
        self.path = path
        write_atomic(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return path

    @staticmethod
    def load(path: str | Path) -> "RunManifest":
        path = Path(path)
        doc = json.loads(path.read_text())
        m = RunManifest(
            master_seed=doc["master_seed"],
            tool_version=doc["tool_version"],
            config=doc.get("config", {}),
            stages=doc.get("stages", {}),
        )
        m.path = path
        return m

    def verify_outputs(self, root: str | Path | None = None) -> list[str]:
        """Recompute every recorded digest; returns mismatch descriptions."""
        root = Path(root) if root else (self.path.parent if self.path else Path("."))
        problems = []
        for stage, info in self.stages.items():
            for rel, digest in info.get("outputs", {}).items():
                p = root / rel
                if not p.exists():
                    problems.append(f"{stage}: missing output {rel}")
                elif sha256_file(p) != digest:
                    problems.append(f"{stage}: digest mismatch for {rel}")
        return problems
