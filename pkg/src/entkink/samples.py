"""Synthetic noisy states shipped with the package.

Each sample is ``(1 - NOISE) family_rho(q) + NOISE I/4`` with q drawn from a
seeded generator. Regenerate with ``python -m entkink.samples``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .qstate import DensityMatrix, family_rho, with_white_noise
from .statefile import dump_state, write_atomic

SEED = 1729
NOISE = 0.05
COUNT = 8
MANIFEST = "manifest.json"


@dataclass(frozen=True)
class Sample:
    path: Path
    q: float
    noise: float

    def expected_fidelity(self, target: str) -> float:
        """Closed-form Bell fidelity of the noisy mixture."""
        base = {"psi+": self.q, "phi+": 1.0 - self.q, "psi-": 0.0, "phi-": 0.0}[target]
        return (1.0 - self.noise) * base + self.noise / 4.0


def noisy_family(q: float, noise: float = NOISE) -> DensityMatrix:
    return with_white_noise(family_rho(q), noise)


def data_dir() -> Path:
    return Path(str(resources.files("entkink") / "data"))


def generate(directory=None, seed: int = SEED, count: int = COUNT, noise: float = NOISE) -> list[Sample]:
    directory = Path(directory) if directory is not None else data_dir()
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    samples = []
    for k, q in enumerate(rng.uniform(0.0, 1.0, size=count)):
        q = float(q)
        name = f"noisy_family_{k:02d}.json"
        dump_state(noisy_family(q, noise), directory / name)
        entries.append({"file": name, "q": q, "noise": noise})
        samples.append(Sample(directory / name, q, noise))
    manifest = {"seed": seed, "noise": noise, "samples": entries}
    write_atomic(directory / MANIFEST, json.dumps(manifest, indent=1) + "\n")
    return samples


def bundled() -> list[Sample]:
    directory = data_dir()
    manifest = json.loads((directory / MANIFEST).read_text(encoding="utf-8"))
    return [Sample(directory / e["file"], float(e["q"]), float(e["noise"])) for e in manifest["samples"]]


if __name__ == "__main__":
    for s in generate():
        print(s.path, s.q)
