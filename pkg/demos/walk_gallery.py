"""Render digit walks for a few constants into ./walks/.

Each digit of a constant (integer part first, then fractional) becomes a
unit step — 0 east, 1 north, 2 west, 3 south, digits taken mod 4 in larger
bases.  The renders are deterministic: same constant, same base, same digit
count, same bytes.
"""

import pathlib

from expmath import digit_walks
from expmath.precision import PrecisionContext


def render(constant: str, base: int, count: int, out_dir: pathlib.Path) -> None:
    ctx = PrecisionContext(count * max(2, (base - 1).bit_length()) + 256, 60)
    stream = digit_walks.digits(constant, base, count, ctx)
    path = digit_walks.walk(stream)
    xs = [p[0] for p in path.points]
    ys = [p[1] for p in path.points]
    svg = digit_walks.render(path, format="svg", size=900)
    target = out_dir / f"{constant.replace('-', '_')}_base{base}_{count}.svg"
    target.write_bytes(svg)
    print(f"{constant:>15} base {base:>2}, {count} digits -> {target.name}"
          f"  (bbox {max(xs) - min(xs)} x {max(ys) - min(ys)},"
          f" endpoint {path.points[-1]})")


def main() -> None:
    out_dir = pathlib.Path("walks")
    out_dir.mkdir(exist_ok=True)
    render("pi", 4, 20_000, out_dir)
    render("e", 4, 20_000, out_dir)
    render("gamma", 4, 10_000, out_dir)
    render("champernowne-4", 4, 20_000, out_dir)  # visibly non-random drift
    render("zeta3", 10, 10_000, out_dir)


if __name__ == "__main__":
    main()
