"""Bundled example programs, random test inputs and a synthetic submission set.

Each bundled program may carry a header comment describing what it reads::

    # inputs: num num int words

``num`` is a decimal, ``int`` a small integer, ``words`` a line of
space-separated integers and ``text`` a single word. A trailing ``*``
repeats a kind enough times to satisfy loops that read until a count.
"""

from __future__ import annotations

import random
import re
from pathlib import Path

CORPUS_DIR = Path(__file__).parent / "corpus"
_HEADER = re.compile(r"^#\s*inputs:(.*)$", re.MULTILINE)
_REPEAT = 10
_WORDS = ("red", "blue", "oak", "pine", "lake", "hill")

# corpus programs that are already decomposed
DECOMPOSED = ("garden_ex1", "garden_ex2", "garden_reference")


def corpus_files() -> list:
    return sorted(CORPUS_DIR.glob("*.src"))


def undecomposed_files() -> list:
    return [p for p in corpus_files() if p.stem not in DECOMPOSED]


def corpus_source(name: str) -> str:
    return (CORPUS_DIR / f"{name}.src").read_text(encoding="utf-8")


def input_kinds(source: str) -> list:
    match = _HEADER.search(source)
    if not match:
        return []
    kinds = []
    for word in match.group(1).split():
        if word.endswith("*"):
            kinds.extend([word[:-1]] * _REPEAT)
        else:
            kinds.append(word)
    return kinds


def random_value(kind: str, rng: random.Random) -> str:
    if kind == "num":
        return str(round(rng.uniform(0.5, 60.0), 2))
    if kind == "int":
        return str(rng.randint(0, _REPEAT))
    if kind == "words":
        return " ".join(str(rng.randint(1, 120)) for _ in range(rng.randint(0, 6)))
    if kind == "text":
        return rng.choice(_WORDS)
    raise ValueError(f"unknown input kind {kind!r}")


def random_inputs(kinds, rng: random.Random) -> list:
    return [random_value(kind, rng) for kind in kinds]


# ---------------------------------------------------------------- synthetic


_INPUTS = """\
    side_length = float(input("Side length: "))
    plant_spacing = float(input("Plant spacing: "))
    soil_depth = float(input("Soil depth: "))
    fill_depth = float(input("Fill depth: "))
"""

_GLOBAL_INPUTS = "\n".join(line.strip() for line in _INPUTS.splitlines()) + "\n"


def _variant_reference(rng) -> str:
    return corpus_source("garden_reference")


def _variant_ex1(rng) -> str:
    return corpus_source("garden_ex1")


def _variant_ex2(rng) -> str:
    return corpus_source("garden_ex2")


def _variant_global(rng) -> str:
    return corpus_source("garden")


def _variant_main_only(rng) -> str:
    body = corpus_source("garden").split("\n")
    lines = [line for line in body if line and not line.startswith("#")]
    return "def main():\n" + "".join(f"    {line}\n" for line in lines) + "\n\nmain()\n"


def _variant_renamed(rng) -> str:
    """The reference with helper and local names changed."""
    helper = rng.choice(("area_of_circle", "circle", "get_area", "round_bed"))
    local = rng.choice(("a", "area", "c_area", "circ"))
    text = re.sub(r"\barea\b", local, corpus_source("garden_reference"))
    return re.sub(r"\bcircle_area\b", helper, text)


def _variant_srp_soil(rng) -> str:
    spacing = rng.choice(("plant_spacing", "spacing"))
    return f"""\
def circle_area(side_length):
    pi = 3.14159
    radius = side_length / 4
    return pi * radius ** 2


def soil(side_length, soil_depth):
    area = circle_area(side_length)
    amount = 3 * area * soil_depth / 27
    print("Soil needed:", amount)
    return area


def main():
{_INPUTS}    area = soil(side_length, soil_depth)
    semi = area / 2 / {spacing} ** 2
    whole = area / {spacing} ** 2
    print("Plants needed:", 4 * semi + whole)
    print("Fill needed:", (side_length ** 2 - 3 * area) * fill_depth / 27)


main()
""".replace("plant_spacing = float", f"{spacing} = float")


def _variant_wrong(rng) -> str:
    """Prints a wrong soil amount: not equivalent to the reference."""
    divisor = rng.choice(("9", "26", "30"))
    return corpus_source("garden_reference").replace("soil_depth / 27", f"soil_depth / {divisor}")


def _variant_syntax_error(rng) -> str:
    return corpus_source("garden_reference").replace("def soil(", "def soil(,", 1)


def _variant_partial_global(rng) -> str:
    return f"""\
def circle_area(side_length):
    pi = 3.14159
    radius = side_length / 4
    return pi * radius ** 2


{_GLOBAL_INPUTS}area = circle_area(side_length)
print("Plants needed:", 4 * (area / 2 / plant_spacing ** 2) + area / plant_spacing ** 2)
print("Soil needed:", 3 * area * soil_depth / 27)
print("Fill needed:", (side_length ** 2 - 3 * area) * fill_depth / 27)
"""


_VARIANTS = (
    _variant_reference,
    _variant_ex1,
    _variant_ex2,
    _variant_global,
    _variant_main_only,
    _variant_renamed,
    _variant_srp_soil,
    _variant_partial_global,
    _variant_wrong,
    _variant_syntax_error,
)


def synthetic_submissions(count: int = 37, seed: int = 2024) -> dict:
    """``{file name: source}`` for a deterministic set of Garden submissions."""
    rng = random.Random(seed)
    out = {}
    for k in range(count):
        variant = _VARIANTS[k % len(_VARIANTS)] if k < len(_VARIANTS) else rng.choice(_VARIANTS)
        out[f"student_{k + 1:02d}.src"] = variant(rng)
    return out


def write_synthetic_corpus(directory, count: int = 37, seed: int = 2024) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in synthetic_submissions(count, seed).items():
        path = directory / name
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
