"""Command-line front end.

Exit status: 0 when every requested check passes, 2 when a check fails,
1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .parabolic import min_coset_reps, min_double_coset_reps
from .rootdata import CartanSpec, RootDataError, WeylGroup, build
from .zipcomb import (
    CombZipDatum,
    ZipDatumError,
    bruhat_order_leq,
    bruhat_strata,
    closure_poset,
    cover_relations,
    monotonicity_check,
    purity_check,
    zip_datum_from_cocharacter,
)

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2
FORMATS = ("json", "dot", "text")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Document:
    """What a command emits: a JSON-able body, its text rendering, an optional DOT graph."""

    body: dict
    text: list[str]
    dot: list[str] | None = None
    checks: dict[str, str] = field(default_factory=dict)

    @property
    def status(self) -> int:
        return EXIT_CHECK if any(v == "FAIL" for v in self.checks.values()) else EXIT_OK

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.body, indent=2, ensure_ascii=False) + "\n"
        if fmt == "dot":
            if self.dot is None:
                raise UsageError("DOT output is available for zip-poset and bruhat-strata only")
            return "\n".join(self.dot) + "\n"
        return "\n".join(self.text) + "\n"


# -- argument parsing -----------------------------------------------------------


def _int_list(tokens: Sequence[str] | None) -> list[int] | None:
    if tokens is None:
        return None
    out = []
    for tok in tokens:
        for part in tok.replace(",", " ").split():
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"expected integers, got {part!r}") from None
    return out


def _sigma(tokens: Sequence[str] | None) -> list[int] | None:
    if tokens is None or list(tokens) == ["id"]:
        return None
    return _int_list(tokens)


def _group(args) -> WeylGroup:
    if args.cartan is None:
        raise UsageError("--cartan is required (a series tag such as C2, or a matrix file)")
    sigma = _sigma(getattr(args, "sigma", None))
    if os.path.exists(args.cartan):
        spec = CartanSpec.from_file(args.cartan, sigma)
    else:
        spec = CartanSpec.from_label(args.cartan, sigma)
    return build(spec)[1]


def _nodes(W: WeylGroup, values: list[int] | None, flag: str) -> list[int]:
    values = [] if values is None else values
    bad = [v for v in values if not 0 <= v < W.rank]
    if bad:
        raise UsageError(f"{flag} index {bad[0]} is outside 0..{W.rank - 1}")
    return sorted(set(values))


def _datum(args) -> CombZipDatum:
    W = _group(args)
    J = _nodes(W, _int_list(args.J), "--J")
    datum = zip_datum_from_cocharacter(W, J, sigma=W.sigma, q=args.q, twist=not args.untwisted)
    if args.K is not None:
        K = _nodes(W, _int_list(args.K), "--K")
        if frozenset(K) != datum.K:
            raise UsageError(f"--K {K} disagrees with the type of Q, which is {sorted(datum.K)}")
    return datum


def _word(W: WeylGroup, w) -> str:
    return W.format_word(w.word)


def _datum_dict(datum: CombZipDatum) -> dict:
    d = datum.to_dict()
    if isinstance(d["cartan"], str):
        return d
    return {**d, "cartan": [list(r) for r in d["cartan"]]}


def _dot_graph(name: str, labels: list[str], edges: list[tuple[int, int]], note: str) -> list[str]:
    lines = [f"// {note}", f"digraph {name} {{", "  rankdir=BT;"]
    lines += [f'  n{i} [label="{label}"];' for i, label in enumerate(labels)]
    lines += [f"  n{i} -> n{j};" for i, j in edges]
    lines.append("}")
    return lines


# -- commands -------------------------------------------------------------------


def cmd_roots(args) -> Document:
    W = _group(args)
    body = {"order": W.order, "positive_roots": W.roots.n_positive}
    return Document(body, [f"order: {W.order}", f"positive_roots: {W.roots.n_positive}"])


def cmd_cosets(args) -> Document:
    W = _group(args)
    J = _nodes(W, _int_list(args.J), "--J")
    order, sub = W.order, len(W.subgroup(J))
    if args.K is None:
        reps = list(min_coset_reps(W, J))
        ok = len(reps) * sub == order
        body = {
            "cartan": W.spec.label, "J": J, "order": order, "order_W_J": sub,
            "reps": [{"word": _word(W, w), "length": w.length} for w in reps],
            "checks": {"index": "PASS" if ok else "FAIL"},
        }
        text = [f"|W| = {order}, |W_J| = {sub}, |^J W| = {len(reps)}"]
        text += [f"{_word(W, w)} ({w.length})" for w in reps]
        text.append(f"index identity: {'PASS' if ok else 'FAIL'}")
        return Document(body, text, checks=body["checks"])
    K = _nodes(W, _int_list(args.K), "--K")
    table = min_double_coset_reps(W, J, K)
    covered = sum(len(table.fiber(x)) for x in table.reps)
    ok = covered == len(min_coset_reps(W, J))
    body = {
        "cartan": W.spec.label, "J": J, "K": K,
        "reps": [
            {"word": _word(W, x), "length": x.length,
             "fiber": [_word(W, w) for w in table.fiber(x)]}
            for x in table.reps
        ],
        "checks": {"partition": "PASS" if ok else "FAIL"},
    }
    text = [f"|^J W^K| = {len(table.reps)}"]
    text += [f"{_word(W, x)} ({x.length}): {' '.join(_word(W, w) for w in table.fiber(x))}" for x in table.reps]
    text.append(f"fibers partition ^J W: {'PASS' if ok else 'FAIL'}")
    return Document(body, text, checks=body["checks"])


def _poset_document(args, include_purity_entries: bool) -> Document:
    datum = _datum(args)
    W = datum.group
    poset = closure_poset(datum, with_galois=args.galois is not None, degree=args.galois or 1)
    purity = purity_check(poset)
    monotone = monotonicity_check(datum)
    checks = {"purity": purity.verdict, "monotone": monotone.verdict}
    words = [_word(W, w) for w in poset.nodes]
    body = {
        "datum": _datum_dict(datum),
        "strata": [{"word": words[i], "length": w.length, "dim": poset.dims[i]} for i, w in enumerate(poset.nodes)],
        "covers": [list(e) for e in poset.edges],
        "checks": checks,
    }
    if poset.galois_classes is not None:
        body["galois_classes"] = [list(c) for c in poset.galois_classes]
    if include_purity_entries or purity.violations or monotone.violations:
        body["reports"] = {
            "purity": {"entries": purity.entries, "violations": purity.violations},
            "monotone": {"violations": monotone.violations},
        }
    chain = all(poset.leq[i][j] or poset.leq[j][i] for i in range(len(poset)) for j in range(len(poset)))
    text = [
        f"datum: {W.spec.label or 'matrix'} J={sorted(datum.J)} K={sorted(datum.K)} "
        f"psi={dict(datum.psi)} sigma={list(datum.sigma)}",
        f"strata: {len(poset)}{' (total chain)' if chain else ''}",
    ]
    text += [f"  {i}: {words[i]} (dim {poset.dims[i]})" for i in range(len(poset))]
    text.append("covers:")
    text += [f"  {words[i]} < {words[j]} (drop {poset.dims[j] - poset.dims[i]})" for i, j in poset.edges]
    if poset.galois_classes is not None:
        text.append("galois classes: " + " | ".join(" ".join(words[k] for k in c) for c in poset.galois_classes))
    text.append(f"purity: {purity.verdict}")
    text += [f"  violation: {v['lower']} < {v['upper']} drops {v['drop']}" for v in purity.violations]
    text.append(f"monotone: {monotone.verdict}")
    text += [f"  violation: {v['lower']} <= {v['upper']} but [{v['proj_lower']}] not <= [{v['proj_upper']}]"
             for v in monotone.violations]
    dot = _dot_graph(
        "zip_strata", [f"{w} ({poset.dims[i]})" for i, w in enumerate(words)], list(poset.edges),
        "edge u -> w: the stratum of u lies in the closure of the stratum of w",
    )
    return Document(body, text, dot, checks)


def cmd_zip_poset(args) -> Document:
    return _poset_document(args, include_purity_entries=False)


def cmd_purity_report(args) -> Document:
    doc = _poset_document(args, include_purity_entries=True)
    doc.dot = None
    return doc


def cmd_bruhat_strata(args) -> Document:
    datum = _datum(args)
    W = datum.group
    strata = bruhat_strata(datum)
    reps = [x for x, _ in strata]
    n = len(reps)
    leq = [[bruhat_order_leq(datum, reps[i], reps[j]) for j in range(n)] for i in range(n)]
    edges = cover_relations(leq)
    table = datum.double_cosets
    fibers = {x: table.fiber(x) for x in reps}
    recursion = sum(len(min_coset_reps(*_restricted(datum, x))) for x in reps)
    ok = recursion == len(datum.cosets)
    checks = {"recursion": "PASS" if ok else "FAIL"}
    body = {
        "datum": _datum_dict(datum),
        "strata": [
            {"word": _word(W, x), "length": x.length, "dim": dim, "fiber": [_word(W, w) for w in fibers[x]]}
            for x, dim in strata
        ],
        "covers": [list(e) for e in edges],
        "checks": checks,
    }
    text = [f"datum: {W.spec.label or 'matrix'} J={sorted(datum.J)} K={sorted(datum.K)}",
            f"bruhat strata: {n}"]
    text += [f"  {_word(W, x)} (dim {dim}): {' '.join(_word(W, w) for w in fibers[x])}" for x, dim in strata]
    text.append(f"recursion |^J W| = sum |^(J_x) W_K|: {len(datum.cosets)} = {recursion} {checks['recursion']}")
    dot = _dot_graph(
        "bruhat_strata", [f"{_word(W, x)} ({dim})" for x, dim in strata], list(edges),
        "edge x' -> x: [x'] <= [x], the stratum of x' lies in the closure of the stratum of x",
    )
    return Document(body, text, dot, checks)


def _restricted(datum: CombZipDatum, x):
    from .zipcomb import restrict_zip_datum

    small = restrict_zip_datum(datum, x)
    return small.group, small.J


def cmd_oracle(args) -> Document:
    from .finitezip import (
        NonStabilized,
        NoFrameFound,
        datum_of,
        dimension_estimate,
        match_representatives,
        orbit_tower,
    )

    if args.mmax < 2:
        raise UsageError("--mmax must be at least 2 for the tower to be compared across levels")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    tower = orbit_tower(args.n, args.d, args.p, args.mmax, args.q)
    inst = tower.levels[1].instance
    datum = datum_of(inst)
    W = datum.group
    expected = len(datum.cosets)
    accepted = tower.stabilized or tower.certified
    count_ok = accepted and tower.num_classes == expected
    checks = {"count": "PASS" if count_ok else "FAIL"}

    if not accepted:
        head = (f"geometric orbits: not stabilized at m <= {args.mmax} "
                f"(anchored classes {tower.num_classes}, signature lower bound {tower.lower_bound}, "
                f"|^J W| = {expected})")
    elif count_ok:
        head = f"geometric orbits: {tower.num_classes} (matches |^J W| = {expected})"
    else:
        head = f"geometric orbits: {tower.num_classes} (differs from |^J W| = {expected})"

    labels, frame, frame_error = {}, None, None
    try:
        labeling = match_representatives(tower, datum)
        labels, frame = labeling.labels, labeling
    except NoFrameFound as exc:
        frame_error = str(exc)

    dims, dims_ok = [], bool(labels)
    for cls in range(tower.num_classes):
        w = labels.get(cls)
        exp_dim = inst.dim_P + w.length if w is not None else None
        est = dimension_estimate(tower, cls, expected=exp_dim)
        dims.append((cls, w, est))
        dims_ok &= est.within()
    checks["dimensions"] = "PASS" if dims_ok else "FAIL"

    summary = tower.summary()
    body = {
        "instance": {"n": args.n, "d": args.d, "p": args.p, "q": inst.field.q, "m_max": args.mmax,
                     "J": list(inst.J), "K": list(inst.K), "dim_P": inst.dim_P, "dim_E": inst.dim_E},
        "tower": summary,
        "expected_classes": expected,
        "geometric_orbits": tower.num_classes if accepted else None,
        "frame": frame.to_dict() if frame is not None else {"error": frame_error},
        "dimensions": [
            {"class": cls, "word": _word(W, w) if w is not None else None, **est.to_dict()}
            for cls, w, est in dims
        ],
        "checks": checks,
    }
    levels = lambda key: " ".join(f"{m}:{c}" for m, c in summary[key].items())  # noqa: E731
    text = [
        head,
        f"instance: GL_{args.n}, d={args.d}, p={args.p}, q={inst.field.q}, m<={args.mmax}",
        f"rational orbits by level: {levels('rational_orbits_by_level')}",
        f"anchored classes by level: {levels('classes_by_level')}",
        f"signature lower bound: {tower.lower_bound}",
        f"stabilized: {'yes' if tower.stabilized else 'no'}, certified: {'yes' if tower.certified else 'no'}",
    ]
    if frame is not None:
        text.append(f"frame g: {frame.frame.g.astype(int).tolist()}, psi matches datum: "
                    f"{'yes' if frame.psi_matches else 'no'}")
    else:
        text.append(f"frame: {frame_error}")
    for cls, w, est in dims:
        label = _word(W, w) if w is not None else "?"
        expect = f"expected {est.expected}" if est.expected is not None else "no label"
        verdict = "PASS" if est.within() else "FAIL"
        text.append(f"class {cls}: w={label} dim estimate {est.estimate:.4f} ({expect}, {est.method}, "
                    f"levels {est.levels[0]},{est.levels[1]}) {verdict}")
    text.append(f"checks: count {checks['count']}, dimensions {checks['dimensions']}")
    return Document(body, text, checks=checks)


COMMANDS: dict[str, Callable] = {
    "roots": cmd_roots,
    "cosets": cmd_cosets,
    "zip-poset": cmd_zip_poset,
    "bruhat-strata": cmd_bruhat_strata,
    "purity-report": cmd_purity_report,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zipstrata", description="Zip strata of Weyl-group data and finite-field oracles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--out", help="write the document here instead of stdout")

    def group(p):
        p.add_argument("--cartan", help="series tag (A2, C2, G2, ...) or a file of integer rows")
        p.add_argument("--sigma", nargs="+", help="diagram automorphism as a permutation of the nodes, or 'id'")

    def zipdatum(p):
        group(p)
        p.add_argument("--J", nargs="*", default=None, help="type of P (0-based nodes)")
        p.add_argument("--K", nargs="*", default=None, help="optional type of Q, checked against the derived one")
        p.add_argument("--q", type=int, default=None, help="field size, recorded as metadata")
        p.add_argument("--untwisted", action="store_true", help="use psi = sigma o int(w0)")

    p = sub.add_parser("roots", help="Weyl group order and number of positive roots")
    group(p)
    common(p)
    p = sub.add_parser("cosets", help="minimal coset (or double coset) representatives")
    group(p)
    p.add_argument("--J", nargs="*", default=None)
    p.add_argument("--K", nargs="*", default=None)
    common(p)
    for name, helptext in (("zip-poset", "closure order on ^J W"),
                           ("purity-report", "length drops along the covers of the closure order"),
                           ("bruhat-strata", "strata indexed by ^J W^K with their dimensions")):
        p = sub.add_parser(name, help=helptext)
        zipdatum(p)
        if name != "bruhat-strata":
            p.add_argument("--galois", type=int, default=None, metavar="DEGREE",
                           help="also report orbits of sigma^DEGREE")
        common(p)
    p = sub.add_parser("oracle", help="count GL_n zip orbits over a tower of finite fields")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--q", type=int, default=None, help="Frobenius exponent (default p)")
    common(p)
    return parser


def _module_errors() -> tuple[type[BaseException], ...]:
    from .finitezip import FieldError, InvalidShape, TooLarge
    from .parabolic import NotARepresentative

    return (RootDataError, ZipDatumError, NotARepresentative, FieldError, InvalidShape, TooLarge, OSError)


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        doc = COMMANDS[args.command](args)
        text = doc.render(args.format)
    except UsageError as exc:
        print(f"zipstrata {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _module_errors() as exc:
        origin = type(exc).__module__.replace("zipstrata.", "")
        print(f"zipstrata {args.command}: {origin}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return doc.status


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
