"""Digit extraction in arbitrary bases and planar digit-walk rendering.

Digits come from exact integer arithmetic on the binary value of each
constant (no decimal round-tripping): the integer part is rendered first
when nonzero, then repeated multiply-and-floor produces fractional digits.
Champernowne's number never touches arithmetic at all - its digits are the
concatenation 1, 2, 3, ... written in the construction base.

A walk maps digit d (mod 4) to a unit step - 0 east, 1 north, 2 west,
3 south - starting from the origin.  Renders are deliberately boring:
pure functions of the path, identical bytes on every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from . import agm, functions
from .precision import (
    BigReal,
    DomainError,
    PrecisionContext,
    PrecisionError,
    _to_fraction,
)

#: digit value -> unit step (east, north, west, south)
DIRECTIONS = ((1, 0), (0, 1), (-1, 0), (0, -1))

_DIGIT_GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class DigitStream:
    constant: str
    base: int
    digits: tuple

    def __post_init__(self):
        if not all(0 <= d < self.base for d in self.digits):
            raise ValueError("digit out of range for base")


@dataclass(frozen=True)
class WalkPath:
    points: tuple
    mapping: tuple = DIRECTIONS


def _champernowne_digits(construction_base: int, count: int):
    out = []
    n = 1
    while len(out) < count:
        m = n
        rep = []
        while m:
            rep.append(m % construction_base)
            m //= construction_base
        out.extend(reversed(rep))
        n += 1
    return out[:count]


def _champernowne_value_bits(construction_base: int, bits: int) -> Fraction:
    """Exact truncation of the Champernowne constant, good to `bits` bits."""
    ndigits = int(bits / math.log2(construction_base)) + 16
    digs = _champernowne_digits(construction_base, ndigits)
    num = 0
    for d in digs:
        num = num * construction_base + d
    return Fraction(num, construction_base ** len(digs))


def _constant_fraction(constant: str, bits: int) -> Fraction:
    """The constant's value as an exact fraction carrying >= `bits` good bits."""
    ctx = PrecisionContext(max(64, bits + 64), max(1, int(bits * 0.28)))
    if constant == "pi":
        return _to_fraction(agm.pi_raw(bits + 8))
    if constant == "e":
        return _to_fraction(functions.exp(1, ctx).value)
    if constant == "gamma":
        return _to_fraction(functions.euler_gamma(ctx).value)
    if constant == "zeta3":
        return _to_fraction(functions.zeta3(ctx).value)
    if constant.startswith("champernowne-"):
        suffix = constant.split("-", 1)[1]
        if not suffix.isdigit() or not 2 <= int(suffix) <= 36:
            raise DomainError(
                "champernowne constants are named champernowne-<m> with m in [2, 36]"
            )
        return _champernowne_value_bits(int(suffix), bits + 16)
    raise DomainError(
        f"unknown constant {constant!r}; choose pi, e, gamma, zeta3, or champernowne-<m>"
    )


def digits(constant: str, base: int, count: int, ctx: PrecisionContext) -> DigitStream:
    """First `count` digits of the constant in `base`, integer part leading.

    A zero integer part contributes no digits (0.1234... starts "1"), which
    keeps concatenation constants pure.  The context must carry at least
    count*log2(base) + 64 bits.
    """
    if not 2 <= base <= 36:
        raise DomainError("base must lie in [2, 36]")
    if count < 1:
        raise DomainError("count must be at least 1")
    need = int(math.ceil(count * math.log2(base))) + 64
    if ctx.bits < need:
        raise PrecisionError(
            f"{count} base-{base} digits need a context of >= {need} bits, got {ctx.bits}"
        )

    if constant.startswith("champernowne-") and constant.split("-", 1)[1] == str(base):
        # same-base request: read the digits straight off the construction
        return DigitStream(
            constant=constant, base=base, digits=tuple(_champernowne_digits(base, count))
        )

    frac = _constant_fraction(constant, need)
    if frac < 0:
        raise DomainError("digit extraction expects a nonnegative constant")
    p, q = frac.numerator, frac.denominator
    whole, r = divmod(p, q)
    out = []
    if whole > 0:
        rep = []
        while whole:
            rep.append(int(whole % base))
            whole //= base
        out.extend(reversed(rep))
    while len(out) < count:
        r *= base
        d, r = divmod(r, q)
        out.append(int(d))
    return DigitStream(constant=constant, base=base, digits=tuple(out[:count]))


def walk(stream: DigitStream) -> WalkPath:
    """Lattice path driven by the stream's digits (d mod 4 picks direction)."""
    if not stream.digits:
        raise DomainError("cannot walk an empty digit stream")
    x, y = 0, 0
    pts = [(0, 0)]
    for d in stream.digits:
        dx, dy = DIRECTIONS[d % 4]
        x, y = x + dx, y + dy
        pts.append((x, y))
    return WalkPath(points=tuple(pts))


# ---------------------------------------------------------------------------
# rendering


def _parse_size(size):
    if isinstance(size, int):
        w = h = size
    else:
        w, h = size
    if w < 16 or h < 16:
        raise DomainError("render size below 16x16 cannot distinguish lattice points")
    return int(w), int(h)


def _hue_rgb(t: float):
    """Map t in [0,1] to an RGB triple along a blue->red hue sweep."""
    h = (1.0 - t) * 2.0 / 3.0  # blue (2/3) down to red (0)
    i = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    q, s = 1.0 - f, f
    rgb = [
        (1.0, s, 0.0),
        (q, 1.0, 0.0),
        (0.0, 1.0, s),
        (0.0, q, 1.0),
        (s, 0.0, 1.0),
        (1.0, 0.0, q),
    ][i]
    return tuple(int(round(255 * c)) for c in rgb)


def _bounding_box(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def _pixel_mapper(points, width, height):
    x0, y0, x1, y1 = _bounding_box(points)
    span_x = max(1, x1 - x0)
    span_y = max(1, y1 - y0)
    margin_x = max(1.0, 0.05 * width)
    margin_y = max(1.0, 0.05 * height)
    scale = min((width - 1 - 2 * margin_x) / span_x, (height - 1 - 2 * margin_y) / span_y)
    scale = max(scale, 1e-9)
    off_x = (width - 1 - scale * (x1 - x0)) / 2.0
    off_y = (height - 1 - scale * (y1 - y0)) / 2.0

    def to_pixel(p):
        px = off_x + scale * (p[0] - x0)
        py = (height - 1) - (off_y + scale * (p[1] - y0))  # image rows grow downward
        return int(round(px)), int(round(py))

    return to_pixel


def _draw_segment(buf, width, height, a, b, rgb):
    (x0, y0), (x1, y1) = a, b
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        if 0 <= x0 < width and 0 <= y0 < height:
            i = 3 * (y0 * width + x0)
            buf[i : i + 3] = bytes(rgb)
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def _render_ppm(path: WalkPath, width: int, height: int, color_mode: str) -> bytes:
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    buf = bytearray(b"\xff" * (3 * width * height))
    to_pixel = _pixel_mapper(path.points, width, height)
    pts = [to_pixel(p) for p in path.points]
    nseg = max(1, len(pts) - 1)
    for i in range(len(pts) - 1):
        if color_mode == "progress":
            rgb = _hue_rgb(i / nseg)
        else:
            rgb = (0, 0, 0)
        _draw_segment(buf, width, height, pts[i], pts[i + 1], rgb)
    return header + bytes(buf)


def _render_svg(path: WalkPath, width: int, height: int, color_mode: str) -> bytes:
    x0, y0, x1, y1 = _bounding_box(path.points)
    # flip y so north points up in the image
    span_x = max(1, x1 - x0)
    span_y = max(1, y1 - y0)
    mx = 0.05 * span_x or 0.5
    my = 0.05 * span_y or 0.5
    view = (x0 - mx, -y1 - my, span_x + 2 * mx, span_y + 2 * my)
    coords = " ".join(f"{p[0]},{-p[1]}" for p in path.points)
    if color_mode == "progress":
        defs = (
            '<defs><linearGradient id="progress" x1="0" y1="0" x2="1" y2="0">'
            '<stop offset="0" stop-color="#0000ff"/>'
            '<stop offset="0.5" stop-color="#00cc66"/>'
            '<stop offset="1" stop-color="#ff0000"/>'
            "</linearGradient></defs>"
        )
        stroke = "url(#progress)"
    else:
        defs = ""
        stroke = "#000000"
    body = (
        '<?xml version="1.0" encoding="UTF-8"?>'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{view[0]:g} {view[1]:g} {view[2]:g} {view[3]:g}">'
        f"{defs}"
        f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
        'stroke-width="0.4" stroke-linecap="round" stroke-linejoin="round"/>'
        "</svg>"
    )
    return body.encode("utf-8")


def render(path: WalkPath, format: str = "ppm", size=512, color_mode: str = "progress") -> bytes:
    """Image bytes for the walk; deterministic down to the last byte."""
    if not path.points:
        raise DomainError("cannot render an empty path")
    if format not in ("ppm", "svg"):
        raise DomainError("format must be 'ppm' or 'svg'")
    if color_mode not in ("progress", "mono"):
        raise DomainError("color_mode must be 'progress' or 'mono'")
    width, height = _parse_size(size)
    if format == "ppm":
        return _render_ppm(path, width, height, color_mode)
    return _render_svg(path, width, height, color_mode)
