"""Command-line front end: verification suites and ad-hoc computations.

Every invocation prints one structured report, JSON by default or a plain
table with ``--plain``.  Reports are deterministic: two runs with the same
arguments agree bit for bit once the timing field is stripped, and item
order follows declaration order, never completion order.

Exit codes: 0 every check passed, 1 a check failed, 2 usage or parse
error, 3 a configured resource ceiling was hit (the partial report is
still printed), 4 an internal invariant was violated.

Resource ceilings come from the FREENIL_LIMITS environment variable,
e.g. ``FREENIL_LIMITS="n=64,l=16,dim=128"``: ``n`` bounds the twisted-ring
suite sizes, ``l`` the word-enumeration length budget, and ``dim`` the
total dimension of loaded nil objects.

Input files may be given by path, or by the bare name of a shipped sample
(``dinf``, ``s3z2``, ``bs12``, ``s3``, ``nil_example``).
"""

from __future__ import annotations

import argparse
import json
import os
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import nilobj
from .amalgam import Amalgam
from .cosets import double_cosets
from .errors import InvariantError, LimitExceeded, UnsupportedOperation
from .groupring import GroupRingElement, grade_decompose, word_sequence_type
from .groups import FiniteSubgroup, format_element, parse_element
from .hnn import HNN
from .laurent import x_diff
from .report import CheckItem, Report
from .skewpoly import SkewLaurent, format_skew
from .store import construction_from_dict
from .syzygy import (
    collapse_certificate,
    complexity,
    defining_map,
    kernel_pair,
    pairwise_relation,
    reduce_chain,
    verify_reduction,
    verify_relations,
)
from .words import (
    Alphabet,
    aperiodic_necklace_count,
    primitive_classes,
    sieve,
    verify_admissible,
)


@dataclass(frozen=True)
class Limits:
    """Ceilings read from FREENIL_LIMITS; crossing one exits with code 3."""

    n: int = 64
    l: int = 16
    dim: int = 128


def read_limits(env=os.environ) -> Limits:
    raw = env.get("FREENIL_LIMITS", "")
    values = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("n", "l", "dim"):
            raise ValueError(
                f'FREENIL_LIMITS entries look like "n=64,l=16,dim=128", got {part!r}'
            )
        values[key] = int(value)
    return Limits(**values)


def ensure_within(value: int, ceiling: int, what: str) -> None:
    if value > ceiling:
        raise LimitExceeded(
            f"{what} {value} exceeds the configured ceiling {ceiling};"
            " set FREENIL_LIMITS to go higher"
        )


def _resolve_input(path_text: str):
    """A literal path, or the name of a shipped sample under the data dir."""
    p = Path(path_text)
    if p.is_file():
        return p
    packaged = resources.files("freenil") / "data"
    for candidate in (path_text, path_text + ".json"):
        q = packaged / candidate
        if q.is_file():
            return q
    raise OSError(f"no such input file: {path_text}")


def _load_construction(path_text: str):
    target = _resolve_input(path_text)
    return construction_from_dict(json.loads(target.read_text(encoding="utf-8")))


def _load_tagged(args):
    path = args.hnn if args.hnn else args.amalgam
    construction = _load_construction(path)
    if args.hnn and not isinstance(construction, HNN):
        raise ValueError(f"{path} does not hold an HNN extension")
    if args.amalgam and not isinstance(construction, Amalgam):
        raise ValueError(f"{path} does not hold an amalgamated product")
    return construction


# Word mini-language.  HNN words are whitespace tokens where T+ and T- are
# the stable letter and its inverse and anything else names a base element;
# amalgam tokens carry a factor tag, 1:ELEMENT or 2:ELEMENT.  Commas inside
# an element stand for spaces, so multi-generator elements stay one token.

def parse_word_tokens(construction, text: str):
    tokens = []
    for raw in text.split():
        if isinstance(construction, HNN):
            if raw == "T+":
                tokens.append(("t", 1))
            elif raw == "T-":
                tokens.append(("t", -1))
            else:
                element = parse_element(construction.base, raw.replace(",", " "))
                tokens.append(("g", element))
        elif isinstance(construction, Amalgam):
            tag, sep, rest = raw.partition(":")
            if not sep or tag not in ("1", "2"):
                raise ValueError(
                    f"amalgam tokens look like 1:ELEMENT or 2:ELEMENT, got {raw!r}"
                )
            k = int(tag)
            element = parse_element(construction.factors[k - 1], rest.replace(",", " "))
            tokens.append((k, element))
        else:
            raise ValueError("words need an amalgam or HNN construction")
    return tokens


def render_word(construction, word) -> str:
    parts = []
    if isinstance(construction, HNN):
        for kind, value in construction.word_tokens(word):
            if kind == "t":
                parts.append("T+" if value == 1 else "T-")
            else:
                parts.append(format_element(construction.base, value).replace(" ", ","))
    else:
        for k, g in construction.word_tokens(word):
            text = format_element(construction.factors[k - 1], g).replace(" ", ",")
            parts.append(f"{k}:{text}")
    return " ".join(parts) if parts else "1"


# Runners.  Each sets the command echo first so a partial report still
# names what was being run, then fills items and data.

def run_words(args, report: Report, limits: Limits) -> None:
    verify = args.mode == "verify" or (args.mode == "sieve" and args.verify)
    report.command = f"words {args.mode} -I {args.alphabet} -L {args.bound}" + (
        " --verify" if args.mode == "sieve" and args.verify else ""
    )
    alphabet = Alphabet(args.alphabet.split(","))
    ensure_within(args.bound, limits.l, "length bound")
    if args.mode == "enumerate":
        words_out = sorted(primitive_classes(alphabet, args.bound), key=alphabet.sort_key)
    else:
        _, words_out = sieve(alphabet, args.bound)
    census = sum(
        aperiodic_necklace_count(len(alphabet), n) for n in range(1, args.bound + 1)
    )
    report.add("word count matches the class census", census, len(words_out))
    if verify:
        report.extend(verify_admissible(words_out, alphabet, args.bound))
    report.data["alphabet"] = list(alphabet.letters)
    report.data["bound"] = args.bound
    report.data["count"] = len(words_out)
    report.data["words"] = ["".join(w) for w in words_out]


def run_verify_kernel(args, report: Report, limits: Limits) -> None:
    report.command = f"grouph verify-kernel --max-n {args.max_n}"
    if args.max_n < 0:
        raise ValueError("--max-n must be >= 0")
    ensure_within(args.max_n, limits.n, "kernel bound")
    for n in range(args.max_n + 1):
        U, V = kernel_pair(n)
        report.add(f"defining map kills the degree-{n} pair", "0", format_skew(defining_map(U, V)))


def run_relations(args, report: Report, limits: Limits) -> None:
    report.command = f"grouph relations --max-q {args.max_q}"
    if args.max_q < 0:
        raise ValueError("--max-q must be >= 0")
    ensure_within(args.max_q, limits.n, "relation bound")
    report.extend(verify_relations(args.max_q))


def run_reduce(args, report: Report, limits: Limits) -> None:
    tail = (
        "".join(f" --pair {p}" for p in args.pair)
        if args.pair
        else f" --count {args.count} --seed {args.seed}"
    )
    report.command = f"grouph reduce --arity {args.arity}{tail}"
    if args.arity < 2:
        raise ValueError("--arity must be >= 2")
    ensure_within(args.arity, limits.n, "arity")
    if not args.pair:
        if args.count < 1:
            raise ValueError("--count must be >= 1")
        report.extend(verify_reduction(args.arity, args.count, args.seed))
        report.data["count"] = args.count
        report.data["seed"] = args.seed
        return
    X = None
    for text in args.pair:
        fields = text.split(",")
        if len(fields) != 2:
            raise ValueError(f"--pair takes P,Q with two integers, got {text!r}")
        p, q = (int(f) for f in fields)
        rel = pairwise_relation(p, q, args.arity)
        X = rel if X is None else X + rel
    trace = reduce_chain(X)
    steps = []
    chis = []
    for v in trace:
        if v.is_zero():
            steps.append("zero")
        elif v.terminal:
            steps.append("terminal")
        else:
            chi = complexity(v)
            chis.append(chi)
            a, b, g = chi.as_tuple()
            steps.append(f"chi=({a}, {b}, {g})")
    ended = trace[-1].is_zero() or trace[-1].terminal
    report.add("the chain reaches an end state", True, ended)
    decreasing = all(b < a for a, b in zip(chis, chis[1:]))
    report.add("complexity strictly decreases", True, decreasing)
    report.data["steps"] = len(trace) - 1
    report.data["trace"] = steps


def run_collapse(args, report: Report, limits: Limits) -> None:
    report.command = (
        f"grouph collapse --max-n {args.max_n} --samples {args.samples} --seed {args.seed}"
    )
    if args.max_n < 1:
        raise ValueError("--max-n must be >= 1")
    if args.samples < 1:
        raise ValueError("--samples must be >= 1")
    ensure_within(args.max_n, limits.n, "ideal stage")
    for n in range(1, args.max_n + 1):
        for it in collapse_certificate(n, args.samples, args.seed):
            report.items.append(CheckItem(f"stage {n}: {it.name}", it.expected, it.got, it.ok))
    images = []
    for j in range(args.max_n):
        image = SkewLaurent.from_poly(x_diff(-j)).collapse()
        images.append(
            {
                "element": format_skew(SkewLaurent.from_poly(x_diff(-j))),
                "image": "0" if image.is_zero() else "nonzero",
            }
        )
    unit = SkewLaurent.one().collapse()
    images.append(
        {
            "element": "1",
            "image": "1" if unit == unit * unit and not unit.is_zero() else "changed",
        }
    )
    report.data["images"] = images


def run_normalize(args, report: Report, limits: Limits) -> None:
    kind = "--hnn" if args.hnn else "--amalgam"
    path = args.hnn if args.hnn else args.amalgam
    report.command = f'algebra normalize {kind} {path} --word "{args.word}"'
    construction = _load_tagged(args)
    word = construction.normalize(parse_word_tokens(construction, args.word))
    rendered = render_word(construction, word)
    again = render_word(
        construction, construction.normalize(parse_word_tokens(construction, rendered))
    )
    report.add("normal form is stable under reparsing", rendered, again)
    report.data["input"] = args.word
    report.data["normal_form"] = rendered
    report.data["sequence"] = list(word_sequence_type(construction, word).seq)


def run_decompose(args, report: Report, limits: Limits) -> None:
    kind = "--hnn" if args.hnn else "--amalgam"
    path = args.hnn if args.hnn else args.amalgam
    quoted = " ".join(f'--word "{w}"' for w in args.word)
    report.command = f"algebra decompose {kind} {path} {quoted}"
    construction = _load_tagged(args)
    u = GroupRingElement.zero(construction)
    for text in args.word:
        u = u + GroupRingElement.basis(construction, parse_word_tokens(construction, text))
    components = grade_decompose(u)
    total = GroupRingElement.zero(construction)
    for part in components.values():
        total = total + part
    report.add("components sum back to the input", True, total == u)
    report.data["terms"] = len(u.terms)
    report.data["components"] = [
        {
            "sequence": list(seq.seq),
            "terms": sorted(
                ([c, render_word(construction, w)] for w, c in part.terms.items()),
                key=lambda pair: pair[1],
            ),
        }
        for seq, part in components.items()
    ]


def run_cosets(args, report: Report, limits: Limits) -> None:
    report.command = f"algebra cosets {args.file} --left {args.left} --right {args.right}"
    construction = _load_construction(args.file)
    if isinstance(construction, (Amalgam, HNN)):
        raise ValueError("double cosets need a plain group file")
    group = construction
    if not group.is_finite:
        raise UnsupportedOperation("double cosets need a finite group")
    subgroups = []
    for text in (args.left, args.right):
        gens = [parse_element(group, part.strip()) for part in text.split(",")]
        subgroups.append(FiniteSubgroup.generated(group, gens))
    orbits = double_cosets(group, subgroups[0], subgroups[1])
    covered = [g for orbit in orbits for g in orbit]
    report.add(
        "orbits partition the group",
        len(group.elements()),
        len(covered),
        ok=len(covered) == len(set(covered)) == len(group.elements()),
    )
    report.data["count"] = len(orbits)
    report.data["orbits"] = [list(orbit) for orbit in orbits]


def _load_nil(path_text: str):
    target = _resolve_input(path_text)
    return nilobj.from_json_dict(json.loads(target.read_text(encoding="utf-8")))


def run_nil_check(args, report: Report, limits: Limits) -> None:
    shown = args.file if args.file else "nil_example"
    report.command = "algebra nil-check" + (f" {args.file}" if args.file else "")
    X = _load_nil(shown)
    ensure_within(X.total_dim(), limits.dim, "total dimension")
    cert = nilobj.is_nilpotent(X)
    report.add("the structure map is nilpotent", True, cert.nilpotent)
    report.extend(nilobj.filtration_items(X))
    report.data["file"] = shown
    report.data["dims"] = {u: X.dims[u] for u in X.ring.units}
    report.data["nilpotent"] = cert.nilpotent
    report.data["index"] = cert.index
    report.data["layer_dims"] = [
        sum(len(layer[u]) for u in X.ring.units) for layer in cert.filtration.subspaces
    ]


def run_nil_map(args, report: Report, limits: Limits) -> None:
    flags = []
    if args.restrict:
        flags.append(f"--restrict {args.restrict}")
    if args.fold:
        flags.append(f"--fold {args.fold}")
    if args.onto:
        flags.append(f"--onto {args.onto}")
    for text in args.twist or ():
        flags.append(f'--twist "{text}"')
    if args.out:
        flags.append(f"--out {args.out}")
    report.command = " ".join([f"algebra nil-map {args.file}"] + flags)

    modes = [m for m in ("restrict", "fold", "twist") if getattr(args, m)]
    if len(modes) != 1:
        raise ValueError("pick exactly one of --restrict, --fold/--onto, --twist")
    if (args.fold is None) != (args.onto is None):
        raise ValueError("--fold THRU and --onto KEEP go together")

    X = _load_nil(args.file)
    ensure_within(X.total_dim(), limits.dim, "total dimension")
    if args.restrict:
        result = nilobj.restrict_diagonal(X, args.restrict)
        applied = f"restrict to unit {args.restrict}"
    elif args.fold:
        result = nilobj.fold_through(X, args.fold, args.onto)
        applied = f"fold through {args.fold} onto {args.onto}"
    else:
        words = [tuple(text.replace(",", " ").split()) for text in args.twist]
        result = nilobj.word_twist(X, words)
        applied = "twist by " + ", ".join("|".join(w) for w in words)
    cert = nilobj.is_nilpotent(result)
    report.add("the transported object is nilpotent", True, cert.nilpotent)
    report.data["applied"] = applied
    report.data["index"] = cert.index
    report.data["result"] = nilobj.to_json_dict(result)
    if args.out:
        nilobj.save(result, args.out)
        report.data["saved"] = args.out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freenil",
        description="Exact verification suites and computations for generalized free products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "plain"), default="json",
                     help="report format (default json)")
    fmt.add_argument("--plain", action="store_true", help="shorthand for --format plain")

    words_p = sub.add_parser("words", help="primitive-word enumeration and the pivot sieve")
    words_sub = words_p.add_subparsers(dest="mode", required=True)
    for mode, blurb in (
        ("sieve", "emit the sieve's pivot words"),
        ("verify", "sieve plus the full admissibility checks"),
        ("enumerate", "canonical primitive rotation classes"),
    ):
        p = words_sub.add_parser(mode, parents=[fmt], help=blurb)
        p.add_argument("-I", "--alphabet", required=True,
                       help="comma-separated letters, e.g. a,b")
        p.add_argument("-L", "--bound", required=True, type=int, help="length budget")
        if mode == "sieve":
            p.add_argument("--verify", action="store_true",
                           help="also run the admissibility checks")
        else:
            p.set_defaults(verify=False)
        p.set_defaults(runner=run_words)

    grouph_p = sub.add_parser("grouph", help="twisted-ring kernel and relation suites")
    grouph_sub = grouph_p.add_subparsers(dest="mode", required=True)

    p = grouph_sub.add_parser("verify-kernel", parents=[fmt],
                              help="check the defining map kills every kernel pair")
    p.add_argument("--max-n", dest="max_n", required=True, type=int,
                   help="largest pair degree to check")
    p.set_defaults(runner=run_verify_kernel)

    p = grouph_sub.add_parser("relations", parents=[fmt],
                              help="check the pairwise relations and their last projections")
    p.add_argument("--max-q", dest="max_q", required=True, type=int,
                   help="largest second index to check")
    p.set_defaults(runner=run_relations)

    p = grouph_sub.add_parser("reduce", parents=[fmt], help="run the complexity descent")
    p.add_argument("--arity", type=int, default=4, help="relation vector length")
    p.add_argument("--count", type=int, default=20, help="random vectors to reduce")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--pair", action="append", metavar="P,Q",
                   help="reduce the sum of these pairwise relations instead of random ones")
    p.set_defaults(runner=run_reduce)

    p = grouph_sub.add_parser("collapse", parents=[fmt],
                              help="certify 1 avoids the finite-stage right ideals")
    p.add_argument("--max-n", dest="max_n", type=int, default=8,
                   help="largest ideal stage to certify")
    p.add_argument("--samples", type=int, default=20, help="random right multiples per stage")
    p.add_argument("--seed", type=int, default=7, help="random seed")
    p.set_defaults(runner=run_collapse)

    algebra_p = sub.add_parser("algebra", help="computations over stored constructions")
    algebra_sub = algebra_p.add_subparsers(dest="mode", required=True)

    word_help = (
        "whitespace tokens: T+/T- and base elements for an HNN file,"
        " 1:ELEMENT / 2:ELEMENT for an amalgam file"
    )
    p = algebra_sub.add_parser("normalize", parents=[fmt], help="normal form of a word")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hnn", metavar="FILE", help="HNN extension file")
    src.add_argument("--amalgam", metavar="FILE", help="amalgamated product file")
    p.add_argument("--word", required=True, help=word_help)
    p.set_defaults(runner=run_normalize)

    p = algebra_sub.add_parser("decompose", parents=[fmt],
                               help="grading components of a ring element")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hnn", metavar="FILE", help="HNN extension file")
    src.add_argument("--amalgam", metavar="FILE", help="amalgamated product file")
    p.add_argument("--word", action="append", required=True,
                   help=word_help + "; repeat to sum several basis words")
    p.set_defaults(runner=run_decompose)

    p = algebra_sub.add_parser("cosets", parents=[fmt],
                               help="double cosets of two generated subgroups")
    p.add_argument("file", help="group file")
    p.add_argument("--left", required=True, help="comma-separated generator names")
    p.add_argument("--right", required=True, help="comma-separated generator names")
    p.set_defaults(runner=run_cosets)

    p = algebra_sub.add_parser("nil-check", parents=[fmt],
                               help="nilpotency certificate for a stored object")
    p.add_argument("file", nargs="?", default=None,
                   help="nil object file (defaults to the shipped sample)")
    p.set_defaults(runner=run_nil_check)

    p = algebra_sub.add_parser("nil-map", parents=[fmt],
                               help="transport a stored object through a functor")
    p.add_argument("file", help="nil object file")
    p.add_argument("--restrict", metavar="UNIT", help="keep one unit and its diagonal letters")
    p.add_argument("--fold", metavar="THRU", help="fold this unit away (needs --onto)")
    p.add_argument("--onto", metavar="KEEP", help="surviving unit for --fold")
    p.add_argument("--twist", action="append", metavar="WORD",
                   help="letter word for the word twist; repeat for a family")
    p.add_argument("--out", metavar="FILE", help="also save the transported object here")
    p.set_defaults(runner=run_nil_map)

    return parser


def _emit(report: Report, args, start: float, code: int) -> int:
    report.timing = time.perf_counter() - start
    fmt = "plain" if args.plain else args.format
    print(report.to_json() if fmt == "json" else report.to_plain())
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    report = Report(command="")
    start = time.perf_counter()
    try:
        limits = read_limits()
        args.runner(args, report, limits)
    except LimitExceeded as exc:
        report.status = "error"
        report.data["limit"] = str(exc)
        return _emit(report, args, start, 3)
    except InvariantError as exc:
        report.status = "error"
        report.data["invariant"] = str(exc)
        return _emit(report, args, start, 4)
    except (ValueError, KeyError, TypeError, OSError, UnsupportedOperation) as exc:
        report.status = "error"
        message = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        report.data["error"] = message
        return _emit(report, args, start, 2)
    report.finalize()
    return _emit(report, args, start, 0 if report.status == "pass" else 1)


if __name__ == "__main__":
    raise SystemExit(main())
