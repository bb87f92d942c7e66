# utils.py
import hashlib
from fractions import Fraction
from typing import List

import numpy as np
import sympy as sp

from config import Config
from exceptions import InputParseError


def derive_seed(seed: int, *parts) -> int:
    """64-bit seed from (seed, suite id, sample key, index, ...) via sha256"""
    text = ":".join(str(p) for p in (seed, *parts))
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the same seed always replays the same stream"""
    return np.random.Generator(np.random.Philox(seed))


def random_rational(rng: np.random.Generator, lo: int = 0, hi: int = 1,
                    max_den: int = Config.MAX_DENOMINATOR, open_interval: bool = True) -> sp.Rational:
    den = int(rng.integers(2, max_den + 1))
    span = (hi - lo) * den
    if open_interval:
        num = int(rng.integers(1, span)) if span > 1 else 1
    else:
        num = int(rng.integers(0, span + 1))
    return sp.Rational(lo) + sp.Rational(num, den)


def distinct_rationals(rng: np.random.Generator, count: int, lo: int = 0, hi: int = 1) -> List[sp.Rational]:
    """count distinct rationals in the open interval (lo, hi), sorted"""
    values = set()
    while len(values) < count:
        values.add(random_rational(rng, lo, hi))
    return sorted(values)


def random_int_rows(rng: np.random.Generator, rows: int, cols: int,
                    bound: int = Config.RANDOM_ENTRY_BOUND) -> List[List[sp.Integer]]:
    data = rng.integers(-bound, bound + 1, size=(rows, cols))
    return [[sp.Integer(int(x)) for x in row] for row in data]


def parse_plane_text(text: str) -> List[List[Fraction]]:
    """Whitespace grid of integers or 'a/b' fractions; blank lines and '#' comments skipped"""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([Fraction(token) for token in line.replace(",", " ").split()])
        except (ValueError, ZeroDivisionError) as e:
            raise InputParseError(f"line {lineno}: {e}") from e
    if not rows:
        raise InputParseError("no matrix rows found")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise InputParseError("rows have different lengths")
    if width != len(rows) + 2:
        raise InputParseError(f"expected a k x (k+2) matrix, got {len(rows)} x {width}")
    return rows
