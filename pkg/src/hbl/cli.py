"""``hbl`` command-line front end.

Exit codes: 0 success, 2 parse error, 3 budget exceeded, 4 invariant violation.
A ``--config`` file of ``key = value`` lines supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import connectivity, geodesics, horoball, render
from .core import (ZdModel, bfs_ball, bfs_norm, evaluate_word, geodesic_words,
                   load_snapshot, norm as word_norm, save_snapshot)
from .errors import BudgetExceeded, InvalidElement, InvariantViolation, SnapshotError
from .heisenberg import H3, HeisenbergModel, canonical_geodesic, eta, h3_norm, natural_projection
from .lamplighter import LAMP, lamplighter_horoball_family
from .wreath import WreathModel

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4


class ParseError(ValueError):
    pass


def parse_range(text: str) -> list[int]:
    """``"8..22"`` (inclusive), ``"3"`` or ``"1,4,9"``; ``"5..4"`` is empty."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise ParseError(f"bad range {text!r}") from None


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise ParseError(f"bad integer list {text!r}") from None


def read_config(path: str) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip('"')
    return out


def make_model(args):
    g = args.group
    if g in ("h3", "heisenberg"):
        return H3
    if g == "h5":
        return HeisenbergModel(2)
    if g.startswith("heisenberg(") and g.endswith(")") and g[11:-1].isdigit():
        return HeisenbergModel(int(g[11:-1]))
    if g == "lamplighter":
        return LAMP
    if g == "z2":
        return ZdModel(2)
    if g == "wreath":
        return WreathModel(int(args.m), int(args.kdim), args.gens)
    raise ParseError(f"unknown group {g!r}")


def parse_element(model, args, text: str | None):
    if model is LAMP and text is None:
        lamps = parse_ints(args.lamps) if args.lamps else ()
        return model.validate((tuple(sorted(lamps)), int(args.head or 0)))
    if text is None:
        raise ParseError("an element is required")
    try:
        if isinstance(model, HeisenbergModel):
            vals = parse_ints(text.replace(";", ","))
            if len(vals) != 2 * model.n + 1:
                raise ParseError(f"expected {2 * model.n + 1} coordinates")
            return vals
        if isinstance(model, ZdModel):
            return parse_ints(text)
        return model.decode(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _out(args, text: str) -> None:
    print(text)


# -- commands ---------------------------------------------------------------------

def cmd_norm(args) -> int:
    model = make_model(args)
    g = parse_element(model, args, args.element)
    if isinstance(model, HeisenbergModel) and model.n == 1:
        n, wit = h3_norm(g)
        _out(args, f"norm: {n}")
        _out(args, f"witness: A={wit.A} B={wit.B} regime={wit.regime} excess={wit.excess}")
    else:
        model.validate(g)
        n = word_norm(model, g, budget_mb=args.budget_mb)
        _out(args, f"norm: {n}")
    if n > args.oracle_max:
        _out(args, "oracle: skipped (above --oracle-max)")
        return EXIT_OK
    try:
        b = bfs_norm(model, g, budget_mb=args.budget_mb)
    except InvalidElement:
        _out(args, "oracle: unreachable (not a group element; value is the formal optimum)")
        return EXIT_OK
    _out(args, f"oracle: bfs={b} {'agree' if b == n else 'DISAGREE'}")
    if b != n:
        raise InvariantViolation(f"closed form {n} differs from BFS {b}")
    return EXIT_OK


def cmd_ball(args) -> int:
    model = make_model(args)
    snap = bfs_ball(model, model.identity(), args.radius, budget_mb=args.budget_mb)
    _out(args, f"elements: {snap.element_count}")
    _out(args, "spheres: " + ",".join(str(s) for s in snap.sphere_sizes()))
    if args.out:
        save_snapshot(snap, args.out, model)
        _out(args, f"wrote {args.out}")
    return EXIT_OK


def cmd_geodesics(args) -> int:
    model = make_model(args)
    g = parse_element(model, args, args.element)
    if args.canonical:
        if model is not H3:
            raise ParseError("--canonical is only available for h3")
        words = [canonical_geodesic(g)]
    else:
        model.validate(g)
        words = geodesic_words(model, g, max_count=args.max, budget_mb=args.budget_mb)
    for w in words:
        _out(args, model.format_word(w) or "(empty)")
    _out(args, f"count: {len(words)}")
    return EXIT_OK


def cmd_distortion(args) -> int:
    model = make_model(args)
    ns = parse_range(args.n)
    table = connectivity.distortion_table(model, ns, args.ell, budget_mb=args.budget_mb)
    if args.out:
        table.to_csv(args.out, model.encode)
    for n in sorted(table.rows):
        _out(args, f"n={n}: " + ",".join(str(v) for v in table.rows[n][1:]))
    if table.rows:
        onset = table.onset()
        _out(args, "onset: " + ",".join(f"{ell}:{onset[ell]}" for ell in range(1, args.ell + 1)))
    if not table.complete:
        raise BudgetExceeded("distortion table incomplete")
    return EXIT_OK


FAMILIES = ("h3-central", "h3-central-valid", "lamplighter", "constant-h3", "constant-lamplighter")


def _family(name: str):
    if name == "h3-central":
        return H3, lambda N: horoball.h3_central_family(N), horoball.predicted_P_h3
    if name == "h3-central-valid":
        return H3, lambda N: horoball.h3_central_family(N, valid=True), horoball.predicted_P_h3
    if name == "lamplighter":
        return LAMP, lamplighter_horoball_family, horoball.predicted_P_lamp
    if name == "constant-h3":
        return H3, horoball.constant_family(H3), None
    if name == "constant-lamplighter":
        return LAMP, horoball.constant_family(LAMP), None
    raise ParseError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def _window(model, text: str):
    vals = parse_ints(text)
    if model is LAMP:
        if len(vals) != 1:
            raise ParseError("lamplighter windows take one size")
        return horoball.lamp_window(vals[0])
    if len(vals) != 3:
        raise ParseError("H_3 windows take three bounds a,b,c")
    return horoball.h3_box(*vals)


def cmd_horoball(args) -> int:
    model, family, predicted = _family(args.family)
    window = _window(model, args.window)
    P, rep = horoball.limit_window(model, family, window, parse_range(args.schedule))
    c = P.counts()
    _out(args, f"window: {len(window)} elements, IN={c[horoball.Status.IN]} OUT={c[horoball.Status.OUT]}")
    _out(args, f"changes at: {rep.changes}")
    _out(args, f"onset: {rep.onset} stable: {rep.stable} trivial: {rep.trivial}")
    if predicted is not None:
        _out(args, f"matches prediction: {P.same_as(predicted(window))}")
    if args.out:
        P.to_csv(args.out, model)
    if args.svg:
        if model is H3:
            render.write(args.svg, render.window_svg(horoball.h3_columns(P), f"{args.family} limit"))
        else:
            heads = {}
            for g in P.members():
                heads[(g[1], len(g[0]))] = heads.get((g[1], len(g[0])), 0) + 1
            render.write(args.svg, render.grid_svg(heads, f"{args.family} limit by head and lamp count"))
    return EXIT_OK


def cmd_busemann(args) -> int:
    model = make_model(args)
    ray = horoball.Ray(model.parse_word(args.prefix or ""), model.parse_word(args.tail))
    window = _window(model, args.window)
    P = horoball.busemann_window(model, ray, window, args.n_max)
    c = P.counts()
    _out(args, " ".join(f"{k.value}={v}" for k, v in c.items()))
    if args.out:
        P.to_csv(args.out, model)
    return EXIT_OK


def cmd_maxca(args) -> int:
    model = make_model(args)
    window = _window(model, args.window) if args.window else horoball.norm_ball_window(model, args.n + 3)
    ball = bfs_ball(model, model.identity(), args.n + 1)
    inner = {g for g, d in ball.distances.items() if d <= args.n}
    x = horoball.indicator(window, inner)
    y = horoball.max_ca_step(x, model)
    want = horoball.indicator(y.window, ball.distances)
    ok = y.same_as(want)
    _out(args, f"shrunken window: {len(y.window)} elements; ball law holds: {ok}")
    if not ok:
        raise InvariantViolation("max automaton broke the ball law")
    return EXIT_OK


def cmd_certify(args) -> int:
    gens = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)]
    if args.l1_length is not None:
        for L in parse_range(args.l1_length):
            _out(args, f"length {L}: max deficit {geodesics.l1_max_certificate_deficit(L)}")
        return EXIT_OK
    if args.word:
        w = H3.parse_word(args.word)
        g = evaluate_word(H3, w)
        pts = [natural_projection(p) for p in _prefixes(w)]
        _out(args, f"element: {H3.encode(g)}")
    elif args.points:
        pts = [parse_ints(p) for p in args.points.split(";")]
    else:
        raise ParseError("give --word, --points or --l1-length")
    cert = geodesics.halfspace_certificate(pts, gens, args.k_max)
    if cert is None:
        _out(args, f"no certificate with deficit <= {args.k_max}")
    else:
        _out(args, f"direction: {cert.direction} offset: {cert.offset}")
    return EXIT_OK


def _prefixes(w):
    from .core import word_path
    return word_path(H3, w)


def cmd_render(args) -> int:
    if args.kind == "eta":
        text = render.eta_svg(args.n)
    elif args.kind == "detours":
        x = parse_ints(args.source)
        y = parse_ints(args.target)
        ball = bfs_ball(H3, H3.identity(), args.n, budget_mb=args.budget_mb)
        count, paths = geodesics.detour_census(ball, x, y, H3)
        text = render.paths_svg((x[0], x[1]), paths, f"{count} shortest paths inside the {args.n}-ball")
    elif args.kind == "snapshot":
        snap = load_snapshot(args.input)
        if not snap.group_id.startswith("heisenberg(1)"):
            raise ParseError("snapshot rendering supports H_3 balls")
        cols: dict = {}
        for g in snap.distances:
            cols[(g[0], g[1])] = max(cols.get((g[0], g[1]), g[2]), g[2])
        text = render.grid_svg(cols, f"column heights, radius {snap.radius}")
    elif args.kind == "window":
        import csv
        cols = {}
        with open(args.input, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                if row["status"] != "IN":
                    continue
                g = H3.decode(row["element"])
                lo, hi = cols.get((g[0], g[1]), (g[2], g[2]))
                cols[(g[0], g[1])] = (min(lo, g[2]), max(hi, g[2]))
        text = render.window_svg(cols, "window")
    else:
        raise ParseError(f"unknown render kind {args.kind!r}")
    render.write(args.out, text)
    _out(args, f"wrote {args.out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    checks = []
    ball = bfs_ball(H3, H3.identity(), 8)
    checks.append(("h3 closed form = bfs on B_8",
                   all(h3_norm(g)[0] == d for g, d in ball.distances.items())))
    for _ in range(200):
        g = tuple(rng.randint(-20, 20) for _ in range(2)) + (rng.randint(-200, 200),)
        if not H3.is_element(g):
            g = (g[0], g[1], g[2] + 1)
        w = canonical_geodesic(g)
        if evaluate_word(H3, w) != g or len(w) != h3_norm(g)[0]:
            checks.append((f"canonical geodesic for {g}", False))
            break
    else:
        checks.append(("canonical geodesics on 200 random elements", True))
    checks.append(("eta_10(0,5) = 20", eta(10, 0, 5) == 20))
    lb = bfs_ball(LAMP, LAMP.identity(), 8)
    checks.append(("lamplighter closed form = bfs on B_8",
                   all(LAMP.norm(g) == d for g, d in lb.distances.items())))
    bad = [name for name, ok in checks if not ok]
    for name, ok in checks:
        _out(args, f"{'ok  ' if ok else 'FAIL'} {name}")
    if bad:
        raise InvariantViolation(f"{len(bad)} self-test checks failed")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hbl", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key = value defaults file")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, group=True):
        if group:
            sp.add_argument("--group", default="h3",
                            help="h3, h5, lamplighter, z2 or wreath")
            sp.add_argument("--m", default="2", help="lamp group order for wreath")
            sp.add_argument("--kdim", default="1", help="rank of K for wreath (1 or 2)")
            sp.add_argument("--gens", default="switch", choices=("switch", "lamp"))
        sp.add_argument("--budget-mb", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        return sp

    sp = common(sub.add_parser("norm", help="word norm with witness and oracle check"))
    sp.add_argument("element", nargs="?")
    sp.add_argument("--lamps", help="lamplighter lamps as odd integers (k+1/2 -> 2k+1)")
    sp.add_argument("--head", type=int)
    sp.add_argument("--oracle-max", type=int, default=12)
    sp.set_defaults(func=cmd_norm)

    sp = common(sub.add_parser("ball", help="enumerate a ball and optionally save it"))
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_ball)

    sp = common(sub.add_parser("geodesics", help="geodesic words for an element"))
    sp.add_argument("element", nargs="?")
    sp.add_argument("--lamps")
    sp.add_argument("--head", type=int)
    sp.add_argument("--max", type=int, default=None)
    sp.add_argument("--canonical", action="store_true")
    sp.set_defaults(func=cmd_geodesics)

    sp = common(sub.add_parser("distortion", help="distortion table of balls"))
    sp.add_argument("--n", default="8..12", help="radius range, e.g. 8..22")
    sp.add_argument("--ell", type=int, default=5)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_distortion)

    sp = common(sub.add_parser("horoball", help="window limit of a ball family"), group=False)
    sp.add_argument("--family", required=True)
    sp.add_argument("--window", required=True)
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--out")
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_horoball)

    sp = common(sub.add_parser("busemann", help="tri-state Busemann horoball prefix"))
    sp.add_argument("--prefix", default="")
    sp.add_argument("--tail", required=True)
    sp.add_argument("--window", required=True)
    sp.add_argument("--n-max", type=int, default=20)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_busemann)

    sp = common(sub.add_parser("maxca", help="check the max automaton on a ball indicator"))
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--window")
    sp.set_defaults(func=cmd_maxca)

    sp = common(sub.add_parser("certify", help="half-space certificates for planar paths"), group=False)
    sp.add_argument("--word")
    sp.add_argument("--points", help="semicolon-separated points x,y")
    sp.add_argument("--l1-length")
    sp.add_argument("--k-max", type=int, default=8)
    sp.set_defaults(func=cmd_certify)

    sp = common(sub.add_parser("render", help="write an SVG figure"), group=False)
    sp.add_argument("--kind", required=True, choices=("eta", "detours", "snapshot", "window"))
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--source", default="0,4,24")
    sp.add_argument("--target", default="0,6,24")
    sp.add_argument("--input")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_render)

    sp = common(sub.add_parser("selftest", help="quick oracle checks"), group=False)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            cfg = read_config(known.config)
            for action in parser._subparsers._group_actions:
                for sp in action.choices.values():
                    valid = {a.dest for a in sp._actions}
                    sp.set_defaults(**{k: v for k, v in cfg.items() if k in valid})
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    except (ParseError, OSError) as exc:
        print(f"hbl: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    for key in ("budget_mb", "threads"):
        val = getattr(args, key, None)
        if val is not None and float(val) <= 0:
            print(f"hbl: error: --{key.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_PARSE
    saved = os.environ.get("HBL_BUDGET_MB")
    if args.budget_mb is not None:
        os.environ["HBL_BUDGET_MB"] = str(args.budget_mb)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"hbl: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"hbl: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ParseError, InvalidElement, SnapshotError, ValueError, OSError) as exc:
        print(f"hbl: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    finally:
        if saved is None:
            os.environ.pop("HBL_BUDGET_MB", None)
        else:
            os.environ["HBL_BUDGET_MB"] = saved


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
