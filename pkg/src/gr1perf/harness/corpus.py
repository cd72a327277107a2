"""Bundled specification corpus."""

from __future__ import annotations

from pathlib import Path

from ..speclang import Specification, parse_spec
from .families import Variant, family_text

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"

# reconstructions of the example listings: file stem -> (variant, n)
LISTINGS = {
    "listing1": (Variant.EFP_GOOD, 4),
    "listing2": (Variant.EFP_BAD, 4),
    "listing3": (Variant.EUN_GOOD, 16),
    "listing4": (Variant.EUN_BAD, 16),
    "listing5": (Variant.FPR_GOOD, 10),
    "listing6": (Variant.FPR_BAD, 10),
    "listing7": (Variant.DD_GOOD, 0),
    "listing8": (Variant.DD_BAD, 0),
    "listing9": (Variant.DEADLOCK, 15),
    "inc_good": (Variant.INC_GOOD, 0),
    "inc_bad": (Variant.INC_BAD, 0),
}

GENERATED = {
    Variant.EFP_GOOD: (3, 6),
    Variant.EFP_BAD: (3, 6),
    Variant.EUN_GOOD: (8, 64),
    Variant.EUN_BAD: (8, 64),
    Variant.FPR_GOOD: (3, 30),
    Variant.FPR_BAD: (3, 30),
    Variant.DEADLOCK: (3, 63),
}


def write_corpus(root: Path = CORPUS_DIR) -> list[Path]:
    """Regenerate the family files under ``root``."""
    out = []
    for sub in ("listings", "generated"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    for stem, (v, n) in LISTINGS.items():
        p = root / "listings" / f"{stem}.spec"
        p.write_text(family_text(v, n) + "\n")
        out.append(p)
    for v, sizes in GENERATED.items():
        for n in sizes:
            p = root / "generated" / f"{v.value.lower()}_{n}.spec"
            p.write_text(family_text(v, n) + "\n")
            out.append(p)
    return out


def spec_files(root: Path | str = CORPUS_DIR) -> list[Path]:
    root = Path(root)
    if root.is_file():
        return [root]
    return sorted(root.rglob("*.spec"))


def load_corpus(root: Path | str = CORPUS_DIR) -> list[tuple[str, Specification]]:
    """``(name, spec)`` for every ``.spec`` file below ``root``."""
    root = Path(root)
    base = root.parent if root.is_file() else root
    return [(str(p.relative_to(base).with_suffix("")), parse_spec(p.read_text()))
            for p in spec_files(root)]
